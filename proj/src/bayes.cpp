#include "defectbench/error.hpp"
#include "defectbench/seed.hpp"
#include "defectbench/stattests.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>

namespace defectbench::stats {

void RopeBounds::validate() const {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < 0.0) || !(upper > 0.0))
    throw ArgumentError("rope bounds must be finite with lower < 0 < upper");
}

RopeBounds default_rope(metrics::Metric m) {
  return m == metrics::Metric::auc ? RopeBounds{-0.01, 0.01} : RopeBounds{-0.05, 0.05};
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::left_wins: return "left_wins";
    case Verdict::right_wins: return "right_wins";
    case Verdict::practically_equivalent: return "practically_equivalent";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

constexpr std::size_t kBatch = 10000;

}  // namespace

PosteriorTriple bayesian_rope_test(std::span<const double> a, std::span<const double> b, const RopeBounds& rope,
                                   const BayesOptions& opts) {
  rope.validate();
  if (a.size() != b.size()) throw ArgumentError("bayesian_rope_test: length mismatch");
  if (a.size() < 2) throw ArgumentError("bayesian_rope_test: needs at least 2 paired values");
  if (opts.mc_samples < 1000) throw ArgumentError("bayesian_rope_test: mc_samples must be >= 1000");
  if (!(opts.prior_strength > 0)) throw ArgumentError("bayesian_rope_test: prior strength must be positive");

  // Index 0 is the pseudo-observation at zero.
  const std::size_t m = a.size() + 1;
  std::vector<double> z(m, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    z[i + 1] = a[i] - b[i];
    if (!std::isfinite(z[i + 1])) throw DataError("bayesian_rope_test: non-finite values");
  }
  // Region of each Walsh average (z_i + z_j) / 2: -1 left, 0 rope, +1 right.
  std::vector<signed char> region(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double s = z[i] + z[j];
      region[i * m + j] = s < 2.0 * rope.lower ? -1 : s > 2.0 * rope.upper ? 1 : 0;
    }

  std::size_t wins[3] = {0, 0, 0};
  std::vector<double> w(m);
  // Draws come in fixed-size batches, each with its own derived stream.
  for (std::size_t start = 0, batch = 0; start < opts.mc_samples; start += kBatch, ++batch) {
    detail::Rng rng(child_seed(opts.seed, batch));
    const std::size_t count = std::min(kBatch, opts.mc_samples - start);
    for (std::size_t s = 0; s < count; ++s) {
      double total = 0;
      for (std::size_t i = 0; i < m; ++i) {
        w[i] = rng.gamma(i == 0 ? opts.prior_strength : 1.0);
        total += w[i];
      }
      for (auto& x : w) x /= total;
      double left = 0, right = 0;
      for (std::size_t i = 0; i < m; ++i) {
        double row_left = 0, row_right = 0;
        for (std::size_t j = 0; j < m; ++j) {
          const auto r = region[i * m + j];
          if (r < 0)
            row_left += w[j];
          else if (r > 0)
            row_right += w[j];
        }
        left += w[i] * row_left;
        right += w[i] * row_right;
      }
      const double inside = 1.0 - left - right;
      // Ties go to the rope, then left.
      if (inside >= left && inside >= right)
        ++wins[1];
      else if (left >= right)
        ++wins[0];
      else
        ++wins[2];
    }
  }

  PosteriorTriple out;
  const double n = static_cast<double>(opts.mc_samples);
  out.p_left = static_cast<double>(wins[0]) / n;
  out.p_rope = static_cast<double>(wins[1]) / n;
  out.p_right = static_cast<double>(wins[2]) / n;
  out.mc_samples = opts.mc_samples;
  out.seed = opts.seed;
  if (out.p_right > opts.threshold)
    out.verdict = Verdict::right_wins;
  else if (out.p_left > opts.threshold)
    out.verdict = Verdict::left_wins;
  else if (out.p_rope > opts.threshold)
    out.verdict = Verdict::practically_equivalent;
  else
    out.verdict = Verdict::inconclusive;
  return out;
}

}  // namespace defectbench::stats
