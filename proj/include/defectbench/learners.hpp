#pragma once

#include "defectbench/dataset.hpp"
#include "defectbench/metrics.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace defectbench::learn {

enum class Algorithm {
  logistic_regression,
  ridge_regression,
  gaussian_naive_bayes,
  knn,
  cart,
  random_forest,
  linear_svm,
  mlp,
  adaboost,
  constant,  // always scores 0; a degenerate baseline for testing
};

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);
const std::vector<Algorithm>& all_algorithms();

using Hyperparameters = std::map<std::string, double>;

/// An algorithm plus one hyperparameter assignment (a "candidate model").
/// Unset hyperparameters take the algorithm default.
struct ClassifierSpec {
  Algorithm algorithm = Algorithm::constant;
  Hyperparameters params;

  /// Throws ArgumentError on unknown names or out-of-range values.
  void validate() const;
  double get(const std::string& name) const;
  /// Stable text form, e.g. "cart(min_leaf=5)".
  std::string describe() const;

  bool operator==(const ClassifierSpec&) const = default;
};

struct CandidateGrid {
  Algorithm algorithm = Algorithm::constant;
  std::vector<ClassifierSpec> candidates;

  void validate() const;
};

/// Grid sized after the reference candidate counts. `n_train` scales the
/// cart min_leaf range.
CandidateGrid default_grid(Algorithm a, std::size_t n_train);

class Model;

/// An immutable fitted classifier. Copies share the fitted state.
class TrainedModel {
 public:
  TrainedModel(ClassifierSpec spec, data::Scaler scaler, std::shared_ptr<const Model> model, bool converged,
               std::string diagnostic);

  const ClassifierSpec& spec() const { return spec_; }
  const data::Scaler& scaler() const { return scaler_; }
  std::size_t feature_count() const { return scaler_.cols(); }
  bool converged() const { return converged_; }
  const std::string& diagnostic() const { return diagnostic_; }
  const Model& model() const { return *model_; }

 private:
  ClassifierSpec spec_;
  data::Scaler scaler_;
  std::shared_ptr<const Model> model_;
  bool converged_;
  std::string diagnostic_;
};

/// Deterministic given (spec, train, seed). Features are standardized with
/// training-split statistics before reaching the algorithm.
TrainedModel fit(const ClassifierSpec& spec, const data::Dataset& train, std::uint64_t seed);

/// Higher score = more likely faulty.
data::Vector predict_scores(const TrainedModel& model, const data::Matrix& x);

struct SelectionTrace {
  std::vector<double> mean_metric;       // per candidate, same order as the grid
  std::vector<int> inner_assignment;     // inner fold of each training row
  std::size_t chosen = 0;
};

/// Inner stratified cross-validation over the grid; returns the candidate
/// with the highest mean metric, earliest on ties. A one-candidate grid is
/// returned without any fitting.
ClassifierSpec select_candidate(const CandidateGrid& grid, const data::Dataset& train, int inner_k,
                                metrics::Metric metric, std::uint64_t seed, SelectionTrace* trace = nullptr,
                                const metrics::CostWeighting& weighting = {});

}  // namespace defectbench::learn
