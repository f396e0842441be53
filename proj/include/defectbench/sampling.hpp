#pragma once

#include "defectbench/dataset.hpp"

#include <cstdint>
#include <vector>

namespace defectbench::sampling {

struct SamplingConfig {
  double target_minority_ratio = 0.20;
  int neighbors = 5;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Number of synthetic minority rows needed to lift the minority share of
/// `n_total` rows to `target_ratio`: max(0, round((t*n - m) / (1 - t))).
std::size_t required_synthetic_count(std::size_t n_minority, std::size_t n_total, double target_ratio);

/// Adaptive synthetic oversampling. Minority points with more majority
/// neighbours receive proportionally more synthetic rows. Synthetic rows are
/// appended after the originals and flagged in `Dataset::synthetic`.
data::Dataset adasyn(const data::Dataset& d, const SamplingConfig& cfg);

/// Same generator as adasyn() with a uniform per-point budget.
data::Dataset smote(const data::Dataset& d, const SamplingConfig& cfg);

/// Integer allocation of `total` proportional to `weights` (largest remainder,
/// ties to the lower index). Weights must be non-negative with positive sum.
std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t total);

struct FoldPlan {
  int k = 0;
  std::vector<int> assignment;

  std::vector<std::size_t> test_indices(int fold) const;
  std::vector<std::size_t> train_indices(int fold) const;
};

/// Stratified k-fold assignment. Each class is shuffled with `rng_seed` and
/// dealt round-robin, so per-fold class counts differ by at most one.
FoldPlan stratified_folds(const data::Labels& labels, int k, std::uint64_t rng_seed);

}  // namespace defectbench::sampling
