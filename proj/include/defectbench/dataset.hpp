#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace defectbench::data {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Class label: +1 is a faulty unit, -1 a clean one.
using Labels = std::vector<int>;

/// Canonical tabular defect dataset. Rows are units, columns are metrics.
///
/// `synthetic` marks rows produced by oversampling; loaders always set it to
/// all-false. Feature values may be NaN only before cleaning.
struct Dataset {
  std::string name;
  Matrix features;
  std::vector<std::string> feature_names;
  Labels labels;
  std::string provenance;
  std::vector<std::uint8_t> synthetic;

  std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(features.cols()); }
  std::size_t positives() const;
  std::size_t negatives() const { return rows() - positives(); }
  double minority_fraction() const;

  /// Subset of rows, in the order given.
  Dataset select_rows(const std::vector<std::size_t>& rows) const;

  /// Throws DataError unless shapes agree, labels are +/-1 and names unique.
  void check_shape() const;

  /// Full invariant check: check_shape() plus finite values, both classes,
  /// n >= 10 and p >= 1.
  void validate() const;
};

struct CsvOptions {
  std::string label_column;
  std::string positive_label;
  std::string name;  // defaults to the file stem
};

/// Reads a comma-separated file with a header row. "?" and empty cells load as
/// NaN. Errors name the row (1-based, header = row 1) and the column.
Dataset load_csv_dataset(const std::filesystem::path& path, const CsvOptions& opts);

struct CleaningPolicy {
  bool drop_missing_rows = true;
  bool dedup = false;
  double lincomb_tol = 1e-8;
};

struct CleaningReport {
  std::size_t rows_dropped_missing = 0;
  std::size_t duplicate_rows_found = 0;
  std::size_t duplicates_removed = 0;
  std::vector<std::string> constant_features_removed;
  std::vector<std::string> linear_combination_features_removed;

  bool empty() const {
    return rows_dropped_missing == 0 && duplicate_rows_found == 0 && duplicates_removed == 0 &&
           constant_features_removed.empty() && linear_combination_features_removed.empty();
  }
};

struct CleanResult {
  Dataset dataset;
  CleaningReport report;
};

/// Missing-row removal, duplicate accounting, constant-column removal and
/// linear-combination removal, in that order. Only deletes rows and columns.
CleanResult clean_dataset(const Dataset& d, const CleaningPolicy& policy = {});

/// Indices of a maximal linearly independent set of columns, scanning left to
/// right. A column is dropped when its residual after projecting onto the
/// columns kept so far has norm <= tol * (its own norm).
std::vector<std::size_t> remove_linear_combinations(const Matrix& m, double tol = 1e-8);

/// Per-column location/scale fitted on a training matrix.
class Scaler {
 public:
  Scaler() = default;
  static Scaler fit(const Matrix& train);

  Matrix transform(const Matrix& x) const;
  Eigen::RowVectorXd transform_row(const Eigen::RowVectorXd& row) const;

  const Vector& means() const { return mean_; }
  const Vector& stds() const { return std_; }
  std::size_t cols() const { return static_cast<std::size_t>(mean_.size()); }

 private:
  Vector mean_;
  Vector std_;
};

}  // namespace defectbench::data
