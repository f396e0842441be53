#include "defectbench/sampling.hpp"

#include "defectbench/error.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace defectbench::sampling {

using data::Dataset;
using data::Matrix;

void SamplingConfig::validate() const {
  if (!(target_minority_ratio > 0.0 && target_minority_ratio <= 0.5))
    throw ArgumentError("target_minority_ratio must lie in (0, 0.5]");
  if (neighbors < 1) throw ArgumentError("neighbor count must be >= 1");
}

std::size_t required_synthetic_count(std::size_t n_minority, std::size_t n_total, double target_ratio) {
  if (n_minority == 0 || n_minority >= n_total)
    throw ArgumentError("required_synthetic_count: need 0 < n_minority < n_total");
  if (!(target_ratio > 0.0 && target_ratio < 1.0)) throw ArgumentError("target ratio must lie in (0, 1)");
  const double m = static_cast<double>(n_minority);
  const double n = static_cast<double>(n_total);
  if (m / n >= target_ratio) return 0;
  const double g = (target_ratio * n - m) / (1.0 - target_ratio);
  // Half-way cases such as 187.5 arrive as 187.49999999999997; nudge before rounding.
  const double rounded = std::floor(g + 0.5 + 1e-9);
  return rounded <= 0 ? 0 : static_cast<std::size_t>(rounded);
}

std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t total) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || !(sum > 0)) throw ArgumentError("apportion: weights must have a positive sum");
  std::vector<std::size_t> out(weights.size());
  std::vector<double> frac(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0) throw ArgumentError("apportion: negative weight");
    const double share = weights[i] / sum * static_cast<double>(total);
    out[i] = static_cast<std::size_t>(std::floor(share));
    frac[i] = share - std::floor(share);
    assigned += out[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++out[order[i % order.size()]];
  return out;
}

namespace {

// Indices of the `k` rows of `pool` closest to row `query` of `x`, excluding
// `query` itself. Ties go to the lower index.
std::vector<std::size_t> nearest(const Matrix& x, std::size_t query, const std::vector<std::size_t>& pool,
                                 std::size_t k) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(pool.size());
  const auto q = x.row(static_cast<Eigen::Index>(query));
  for (auto j : pool) {
    if (j == query) continue;
    dist.emplace_back((x.row(static_cast<Eigen::Index>(j)) - q).squaredNorm(), j);
  }
  k = std::min(k, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

enum class Budget { adaptive, uniform };

Dataset oversample(const Dataset& d, const SamplingConfig& cfg, Budget budget) {
  cfg.validate();
  d.check_shape();
  const std::size_t n = d.rows();
  const std::size_t pos = d.positives();
  if (pos == 0 || pos == n) throw DataError(d.name + ": oversampling needs both classes");
  const int minority_label = pos <= n - pos ? 1 : -1;

  std::vector<std::size_t> minority;
  for (std::size_t i = 0; i < n; ++i)
    if (d.labels[i] == minority_label) minority.push_back(i);
  const std::size_t g_total = required_synthetic_count(minority.size(), n, cfg.target_minority_ratio);
  if (g_total == 0) return d;

  const auto k = static_cast<std::size_t>(cfg.neighbors);
  const Matrix z = data::Scaler::fit(d.features).transform(d.features);

  std::vector<double> weights(minority.size(), 1.0);
  if (budget == Budget::adaptive) {
    std::vector<std::size_t> everyone(n);
    std::iota(everyone.begin(), everyone.end(), 0);
    double sum = 0;
    for (std::size_t i = 0; i < minority.size(); ++i) {
      auto nb = nearest(z, minority[i], everyone, k);
      const auto majority = std::count_if(nb.begin(), nb.end(), [&](std::size_t j) {
        return d.labels[j] != minority_label;
      });
      weights[i] = nb.empty() ? 0.0 : static_cast<double>(majority) / static_cast<double>(nb.size());
      sum += weights[i];
    }
    // No majority neighbours anywhere: fall back to the uniform budget.
    if (sum == 0) std::fill(weights.begin(), weights.end(), 1.0);
  }
  const auto per_point = apportion(weights, g_total);

  Dataset out = d;
  if (out.synthetic.empty()) out.synthetic.assign(n, 0);
  out.features.conservativeResize(static_cast<Eigen::Index>(n + g_total), Eigen::NoChange);
  out.labels.resize(n + g_total, minority_label);
  out.synthetic.resize(n + g_total, 1);

  detail::Rng rng(cfg.rng_seed);
  auto row = static_cast<Eigen::Index>(n);
  for (std::size_t i = 0; i < minority.size(); ++i) {
    if (per_point[i] == 0) continue;
    const auto xi = d.features.row(static_cast<Eigen::Index>(minority[i]));
    // With a single minority point there is nothing to interpolate towards.
    const auto nb = minority.size() == 1 ? std::vector<std::size_t>{} : nearest(z, minority[i], minority, k);
    for (std::size_t s = 0; s < per_point[i]; ++s, ++row) {
      if (nb.empty()) {
        out.features.row(row) = xi;
        continue;
      }
      const auto partner = nb[rng.index(nb.size())];
      const double lambda = rng.uniform();
      out.features.row(row) = xi + lambda * (d.features.row(static_cast<Eigen::Index>(partner)) - xi);
    }
  }
  return out;
}

}  // namespace

Dataset adasyn(const Dataset& d, const SamplingConfig& cfg) { return oversample(d, cfg, Budget::adaptive); }

Dataset smote(const Dataset& d, const SamplingConfig& cfg) { return oversample(d, cfg, Budget::uniform); }

std::vector<std::size_t> FoldPlan::test_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] != fold) out.push_back(i);
  return out;
}

FoldPlan stratified_folds(const data::Labels& labels, int k, std::uint64_t rng_seed) {
  if (k < 2) throw ArgumentError("stratified_folds: k must be >= 2");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1)
      pos.push_back(i);
    else if (labels[i] == -1)
      neg.push_back(i);
    else
      throw DataError("stratified_folds: labels must be +1 or -1");
  }
  const auto uk = static_cast<std::size_t>(k);
  if (pos.size() < uk)
    throw DataError("stratified_folds: class +1 has " + std::to_string(pos.size()) + " members, fewer than k=" +
                    std::to_string(k));
  if (neg.size() < uk)
    throw DataError("stratified_folds: class -1 has " + std::to_string(neg.size()) + " members, fewer than k=" +
                    std::to_string(k));

  detail::Rng rng(rng_seed);
  FoldPlan plan{k, std::vector<int>(labels.size(), -1)};
  std::size_t slot = 0;
  for (auto* cls : {&pos, &neg}) {
    rng.shuffle(*cls);
    for (auto i : *cls) plan.assignment[i] = static_cast<int>(slot++ % uk);
  }
  return plan;
}

}  // namespace defectbench::sampling
