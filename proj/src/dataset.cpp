#include "defectbench/dataset.hpp"

#include "csv.hpp"
#include "defectbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace defectbench::data {

std::size_t Dataset::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

double Dataset::minority_fraction() const {
  if (labels.empty()) return 0.0;
  auto pos = positives();
  return static_cast<double>(std::min(pos, rows() - pos)) / static_cast<double>(rows());
}

Dataset Dataset::select_rows(const std::vector<std::size_t>& idx) const {
  Dataset out;
  out.name = name;
  out.feature_names = feature_names;
  out.provenance = provenance;
  out.features.resize(static_cast<Eigen::Index>(idx.size()), features.cols());
  out.labels.reserve(idx.size());
  out.synthetic.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(idx[i]));
    out.labels.push_back(labels[idx[i]]);
    out.synthetic.push_back(synthetic.empty() ? 0 : synthetic[idx[i]]);
  }
  return out;
}

void Dataset::check_shape() const {
  if (labels.size() != rows()) throw DataError(name + ": label count does not match row count");
  if (!synthetic.empty() && synthetic.size() != rows())
    throw DataError(name + ": synthetic flag count does not match row count");
  if (feature_names.size() != cols()) throw DataError(name + ": feature name count does not match columns");
  for (int y : labels)
    if (y != 1 && y != -1) throw DataError(name + ": labels must be +1 or -1");
  std::set<std::string> seen;
  for (const auto& f : feature_names)
    if (!seen.insert(f).second) throw DataError(name + ": duplicate feature name '" + f + "'");
}

void Dataset::validate() const {
  check_shape();
  if (rows() < 10) throw DataError(name + ": fewer than 10 rows");
  if (cols() < 1) throw DataError(name + ": no features");
  if (!features.allFinite()) throw DataError(name + ": non-finite feature values");
  auto pos = positives();
  if (pos == 0 || pos == rows()) throw DataError(name + ": single-class labels");
}

Dataset load_csv_dataset(const std::filesystem::path& path, const CsvOptions& opts) {
  auto table = csv::read(path);
  const auto& header = table.header;

  std::set<std::string> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].empty()) throw DataError(path.string() + ": empty header name in column " + std::to_string(c + 1));
    if (!seen.insert(header[c]).second) throw DataError(path.string() + ": duplicate header name '" + header[c] + "'");
  }
  auto label_it = std::find(header.begin(), header.end(), opts.label_column);
  if (label_it == header.end())
    throw DataError(path.string() + ": label column '" + opts.label_column + "' not found");
  const auto label_col = static_cast<std::size_t>(label_it - header.begin());

  Dataset d;
  d.name = opts.name.empty() ? path.stem().string() : opts.name;
  d.provenance = path.string();
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_col) d.feature_names.push_back(header[c]);

  const auto n = table.rows.size();
  d.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d.feature_names.size()));
  d.labels.reserve(n);
  d.synthetic.assign(n, 0);
  std::set<std::string> raw_labels;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = table.rows[r];
    Eigen::Index out_c = 0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == label_col) continue;
      const auto& cell = row[c];
      double v;
      if (cell.empty() || cell == "?") {
        v = std::numeric_limits<double>::quiet_NaN();
      } else if (!csv::parse_double(cell, v)) {
        throw DataError(path.string() + ": row " + std::to_string(r + 2) + ", column '" + header[c] +
                        "': cannot parse '" + cell + "' as a number");
      }
      d.features(static_cast<Eigen::Index>(r), out_c++) = v;
    }
    raw_labels.insert(row[label_col]);
    d.labels.push_back(row[label_col] == opts.positive_label ? 1 : -1);
  }
  if (raw_labels.size() < 2) throw DataError(path.string() + ": single-class labels");
  auto pos = d.positives();
  if (pos == 0 || pos == n)
    throw DataError(path.string() + ": single-class labels (positive label '" + opts.positive_label +
                    "' matches " + (pos == 0 ? "no" : "every") + " row)");
  d.check_shape();
  return d;
}

namespace {

void require_usable(const Dataset& d, const char* step) {
  auto pos = d.positives();
  if (d.rows() < 10)
    throw DataError(d.name + ": cleaning step '" + step + "' left " + std::to_string(d.rows()) + " rows (< 10)");
  if (pos == 0 || pos == d.rows())
    throw DataError(d.name + ": cleaning step '" + step + "' left a single class");
  if (d.cols() == 0) throw DataError(d.name + ": cleaning step '" + step + "' removed every feature");
}

Dataset select_cols(const Dataset& d, const std::vector<std::size_t>& keep) {
  Dataset out = d;
  out.features.resize(d.features.rows(), static_cast<Eigen::Index>(keep.size()));
  out.feature_names.clear();
  for (std::size_t j = 0; j < keep.size(); ++j) {
    out.features.col(static_cast<Eigen::Index>(j)) = d.features.col(static_cast<Eigen::Index>(keep[j]));
    out.feature_names.push_back(d.feature_names[keep[j]]);
  }
  return out;
}

}  // namespace

CleanResult clean_dataset(const Dataset& input, const CleaningPolicy& policy) {
  if (!(policy.lincomb_tol > 0)) throw ArgumentError("lincomb_tol must be positive");
  input.check_shape();
  CleaningReport report;
  Dataset d = input;
  if (d.synthetic.empty()) d.synthetic.assign(d.rows(), 0);

  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < d.rows(); ++r)
    if (!d.features.row(static_cast<Eigen::Index>(r)).array().isNaN().any()) keep.push_back(r);
  if (keep.size() != d.rows()) {
    if (!policy.drop_missing_rows)
      throw DataError(d.name + ": missing values present and drop_missing_rows is off");
    report.rows_dropped_missing = d.rows() - keep.size();
    d = d.select_rows(keep);
  }
  if (!d.features.allFinite()) throw DataError(d.name + ": infinite feature values");
  require_usable(d, "drop_missing_rows");

  // Exact duplicates: identical features and label.
  std::map<std::pair<std::vector<double>, int>, std::size_t> first_seen;
  keep.clear();
  for (std::size_t r = 0; r < d.rows(); ++r) {
    auto row = d.features.row(static_cast<Eigen::Index>(r));
    std::vector<double> key(static_cast<std::size_t>(row.size()));
    for (Eigen::Index c = 0; c < row.size(); ++c) key[static_cast<std::size_t>(c)] = row(c);
    if (first_seen.emplace(std::make_pair(std::move(key), d.labels[r]), r).second) keep.push_back(r);
  }
  report.duplicate_rows_found = d.rows() - keep.size();
  if (policy.dedup && report.duplicate_rows_found > 0) {
    report.duplicates_removed = report.duplicate_rows_found;
    d = d.select_rows(keep);
    require_usable(d, "dedup");
  }

  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < d.cols(); ++c) {
    auto col = d.features.col(static_cast<Eigen::Index>(c));
    if (col.maxCoeff() > col.minCoeff())
      cols.push_back(c);
    else
      report.constant_features_removed.push_back(d.feature_names[c]);
  }
  if (cols.size() != d.cols()) d = select_cols(d, cols);
  require_usable(d, "constant_features");

  auto retained = remove_linear_combinations(d.features, policy.lincomb_tol);
  if (retained.size() != d.cols()) {
    std::size_t next = 0;
    for (std::size_t c = 0; c < d.cols(); ++c) {
      if (next < retained.size() && retained[next] == c)
        ++next;
      else
        report.linear_combination_features_removed.push_back(d.feature_names[c]);
    }
    d = select_cols(d, retained);
  }
  d.validate();
  return {std::move(d), std::move(report)};
}

std::vector<std::size_t> remove_linear_combinations(const Matrix& m, double tol) {
  if (!(tol > 0)) throw ArgumentError("tolerance must be positive");
  if (!m.allFinite()) throw DataError("remove_linear_combinations: non-finite entries");
  const Eigen::Index n = m.rows();
  std::vector<std::size_t> kept;
  Matrix basis(n, 0);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Vector col = m.col(j);
    const double norm = col.norm();
    Vector resid = col;
    // Two passes of Gram-Schmidt keep the residual orthogonal to working precision.
    for (int pass = 0; pass < 2 && basis.cols() > 0; ++pass) resid -= basis * (basis.transpose() * resid);
    const double rnorm = resid.norm();
    if (norm == 0.0 || rnorm <= tol * norm) continue;
    basis.conservativeResize(n, basis.cols() + 1);
    basis.col(basis.cols() - 1) = resid / rnorm;
    kept.push_back(static_cast<std::size_t>(j));
  }
  return kept;
}

Scaler Scaler::fit(const Matrix& train) {
  if (train.rows() == 0) throw ArgumentError("Scaler::fit: empty training matrix");
  Scaler s;
  s.mean_ = train.colwise().mean().transpose();
  s.std_.resize(train.cols());
  for (Eigen::Index c = 0; c < train.cols(); ++c) {
    const double var = (train.col(c).array() - s.mean_(c)).square().mean();
    const double sd = std::sqrt(var);
    s.std_(c) = sd > 0 && std::isfinite(sd) ? sd : 1.0;
  }
  return s;
}

Matrix Scaler::transform(const Matrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != cols())
    throw ArgumentError("Scaler: expected " + std::to_string(cols()) + " columns, got " + std::to_string(x.cols()));
  return ((x.rowwise() - mean_.transpose()).array().rowwise() / std_.transpose().array()).matrix();
}

Eigen::RowVectorXd Scaler::transform_row(const Eigen::RowVectorXd& row) const {
  if (static_cast<std::size_t>(row.size()) != cols()) throw ArgumentError("Scaler: column count mismatch");
  return ((row - mean_.transpose()).array() / std_.transpose().array()).matrix();
}

}  // namespace defectbench::data
