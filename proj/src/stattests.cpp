#include "defectbench/stattests.hpp"

#include "csv.hpp"
#include "defectbench/error.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

namespace defectbench::stats {

void MetricMatrix::validate() const {
  if (k() < 2) throw DataError("metric matrix needs at least 2 classifiers");
  if (n() < 2) throw DataError("metric matrix needs at least 2 datasets");
  if (static_cast<std::size_t>(values.rows()) != k() || static_cast<std::size_t>(values.cols()) != n())
    throw DataError("metric matrix shape does not match its names");
  std::set<std::string> seen(classifiers.begin(), classifiers.end());
  if (seen.size() != classifiers.size()) throw DataError("duplicate classifier names in metric matrix");
  seen = std::set<std::string>(datasets.begin(), datasets.end());
  if (seen.size() != datasets.size()) throw DataError("duplicate dataset names in metric matrix");
  if (!values.allFinite()) throw DataError("metric matrix has non-finite cells");
}

std::size_t MetricMatrix::index_of(const std::string& classifier) const {
  auto it = std::find(classifiers.begin(), classifiers.end(), classifier);
  if (it == classifiers.end()) throw ArgumentError("classifier '" + classifier + "' not found in matrix");
  return static_cast<std::size_t>(it - classifiers.begin());
}

std::vector<double> MetricMatrix::row(const std::string& classifier) const {
  const auto i = static_cast<Eigen::Index>(index_of(classifier));
  std::vector<double> out(n());
  for (std::size_t j = 0; j < n(); ++j) out[j] = values(i, static_cast<Eigen::Index>(j));
  return out;
}

MetricMatrix MetricMatrix::subset(const std::vector<std::string>& names) const {
  MetricMatrix out{metric, name, {}, datasets, Eigen::MatrixXd(static_cast<Eigen::Index>(names.size()), values.cols())};
  std::string missing;
  for (const auto& name : names)
    if (std::find(classifiers.begin(), classifiers.end(), name) == classifiers.end())
      missing += (missing.empty() ? "" : ", ") + name;
  if (!missing.empty()) throw ArgumentError("subset names not found: " + missing);
  for (std::size_t r = 0; r < names.size(); ++r) {
    out.values.row(static_cast<Eigen::Index>(r)) = values.row(static_cast<Eigen::Index>(index_of(names[r])));
    out.classifiers.push_back(names[r]);
  }
  return out;
}

MetricMatrix ingest_metric_matrix(const std::filesystem::path& path, const std::string& metric) {
  const auto table = csv::read(path);
  if (table.header.empty() || table.header.front() != "classifier")
    throw DataError(path.string() + ": first header must be 'classifier'");
  MetricMatrix m;
  m.metric = metric;
  m.name = path.stem().string();
  m.datasets.assign(table.header.begin() + 1, table.header.end());
  for (const auto& name : m.datasets)
    if (name.empty()) throw DataError(path.string() + ": empty dataset name in header");
  m.values.resize(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(m.datasets.size()));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row[0].empty()) throw DataError(path.string() + ": row " + std::to_string(r + 2) + " has no classifier name");
    m.classifiers.push_back(row[0]);
    for (std::size_t c = 1; c < row.size(); ++c) {
      const std::string where = path.string() + ": row " + std::to_string(r + 2) + " (" + row[0] + "), column '" +
                                table.header[c] + "'";
      if (row[c].empty()) throw DataError(where + ": missing cell");
      double v;
      if (!csv::parse_double(row[c], v) || !std::isfinite(v))
        throw DataError(where + ": cannot parse '" + row[c] + "' as a number");
      m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c - 1)) = v;
    }
  }
  m.validate();
  return m;
}

void write_metric_matrix(const MetricMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "classifier";
  for (const auto& d : m.datasets) out << ',' << csv::escape(d);
  out << '\n';
  for (std::size_t i = 0; i < m.k(); ++i) {
    out << csv::escape(m.classifiers[i]);
    for (std::size_t j = 0; j < m.n(); ++j)
      out << ',' << csv::format_double(m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    out << '\n';
  }
}

namespace {

// Midranks of `v` in descending order (largest value gets rank 1). Also
// accumulates sum(t^3 - t) over tie groups.
std::vector<double> descending_midranks(const std::vector<double>& v, double* tie_term = nullptr) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = mid;
    if (tie_term) {
      const double t = static_cast<double>(j - i);
      *tie_term += t * t * t - t;
    }
    i = j;
  }
  return ranks;
}

}  // namespace

RankTable average_ranks(const MetricMatrix& m) {
  m.validate();
  RankTable out{m.classifiers, std::vector<double>(m.k(), 0.0),
                Eigen::MatrixXd(static_cast<Eigen::Index>(m.k()), static_cast<Eigen::Index>(m.n()))};
  for (std::size_t j = 0; j < m.n(); ++j) {
    std::vector<double> col(m.k());
    for (std::size_t i = 0; i < m.k(); ++i)
      col[i] = m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    const auto r = descending_midranks(col);
    for (std::size_t i = 0; i < m.k(); ++i) out.ranks(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r[i];
  }
  for (std::size_t i = 0; i < m.k(); ++i) out.average[i] = out.ranks.row(static_cast<Eigen::Index>(i)).mean();
  return out;
}

FriedmanResult friedman_test(const MetricMatrix& m) {
  m.validate();
  if (m.k() < 3)
    throw ArgumentError("friedman_test needs k >= 3 classifiers; compare two classifiers with the Wilcoxon test");
  const double k = static_cast<double>(m.k());
  const double n = static_cast<double>(m.n());
  double tie_term = 0;
  std::vector<double> rank_sum(m.k(), 0.0);
  for (std::size_t j = 0; j < m.n(); ++j) {
    std::vector<double> col(m.k());
    for (std::size_t i = 0; i < m.k(); ++i)
      col[i] = m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    const auto r = descending_midranks(col, &tie_term);
    for (std::size_t i = 0; i < m.k(); ++i) rank_sum[i] += r[i];
  }
  FriedmanResult out;
  out.df = static_cast<int>(m.k()) - 1;
  const double correction = 1.0 - tie_term / (n * (k * k * k - k));
  if (correction <= 1e-12) return out;  // every dataset fully tied
  double ss = 0;
  for (double r : rank_sum) ss += r * r;
  const double stat = (12.0 / (n * k * (k + 1.0)) * ss - 3.0 * n * (k + 1.0)) / correction;
  out.chi_square = std::max(0.0, stat);
  out.p_value = out.chi_square == 0.0 ? 1.0 : boost::math::gamma_q(0.5 * out.df, 0.5 * out.chi_square);
  return out;
}

double nemenyi_q(int k, double alpha) {
  // Studentized range quantiles at infinite df, divided by sqrt(2); index = k.
  static constexpr double q05[] = {0,     0,     1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164,
                                   3.219, 3.268, 3.313, 3.354, 3.391, 3.426, 3.458, 3.489, 3.517, 3.544};
  if (std::abs(alpha - 0.05) > 1e-12) throw ArgumentError("nemenyi_q is tabulated for alpha = 0.05 only");
  if (k < 2 || k > 20) throw ArgumentError("nemenyi_q: k = " + std::to_string(k) + " outside the table range 2..20");
  return q05[k];
}

double critical_distance(int k, int n_datasets, double q_alpha) {
  if (k < 2) throw ArgumentError("critical_distance: k must be >= 2");
  if (n_datasets < 1) throw ArgumentError("critical_distance: N must be >= 1");
  return q_alpha * std::sqrt(static_cast<double>(k) * (k + 1) / (6.0 * n_datasets));
}

std::vector<NemenyiPair> nemenyi_pairwise(const RankTable& ranks, double cd) {
  std::vector<NemenyiPair> out;
  for (std::size_t i = 0; i < ranks.average.size(); ++i)
    for (std::size_t j = i + 1; j < ranks.average.size(); ++j) {
      const double gap = std::abs(ranks.average[i] - ranks.average[j]);
      // Inclusive boundary; the slack absorbs rounding in gap and cd.
      out.push_back({i, j, gap, gap >= cd - 1e-12});
    }
  return out;
}

namespace {

double normal_upper_tail(double z) { return 0.5 * boost::math::erfc(z / std::sqrt(2.0)); }

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, WilcoxonMethod method) {
  if (a.size() != b.size()) throw ArgumentError("wilcoxon_signed_rank: length mismatch");
  std::vector<double> diff;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (!std::isfinite(d)) throw DataError("wilcoxon_signed_rank: non-finite values");
    if (d != 0.0) diff.push_back(d);
  }
  WilcoxonResult out;
  out.n_effective = diff.size();
  if (diff.empty()) {
    out.degenerate = true;
    return out;
  }
  if (diff.size() < 5)
    throw ArgumentError("wilcoxon_signed_rank: needs at least 5 non-zero differences, got " +
                        std::to_string(diff.size()));

  std::vector<double> mags(diff.size());
  for (std::size_t i = 0; i < diff.size(); ++i) mags[i] = -std::abs(diff[i]);  // descending helper -> ascending
  double tie_term = 0;
  auto ranks = descending_midranks(mags, &tie_term);
  const std::size_t n = diff.size();
  double w_plus = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (diff[i] > 0) w_plus += ranks[i];
  out.statistic = w_plus;

  const bool exact = method == WilcoxonMethod::exact || (method == WilcoxonMethod::automatic && n <= 20);
  out.exact = exact;
  if (exact) {
    if (n > 40) throw ArgumentError("wilcoxon_signed_rank: exact enumeration limited to n <= 40");
    // Doubled midranks are integers; count sign assignments per doubled W+.
    std::vector<int> r2(n);
    int total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      r2[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
      total += r2[i];
    }
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1.0;
    int reach = 0;
    for (int r : r2) {
      for (int s = reach; s >= 0; --s)
        if (count[static_cast<std::size_t>(s)] != 0.0) count[static_cast<std::size_t>(s + r)] += count[static_cast<std::size_t>(s)];
      reach += r;
    }
    const int w2 = static_cast<int>(std::lround(2.0 * w_plus));
    double lower = 0, upper = 0, all = 0;
    for (int s = 0; s <= total; ++s) {
      const double c = count[static_cast<std::size_t>(s)];
      all += c;
      if (s <= w2) lower += c;
      if (s >= w2) upper += c;
    }
    out.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / all);
    return out;
  }

  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  if (var <= 0) {
    out.p_value = 1.0;
    return out;
  }
  const double dev = std::max(0.0, std::abs(w_plus - mean) - 0.5);
  out.p_value = std::min(1.0, 2.0 * normal_upper_tail(dev / std::sqrt(var)));
  return out;
}

}  // namespace defectbench::stats
