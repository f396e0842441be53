#pragma once

// Slow, independent reference implementations used to check the library.

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

inline int numeric_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9) {
  if (m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > rel_tol * s(0);
  return r;
}

// Lexicographically first maximal independent column set, found by scoring
// every subset's rank.
inline std::vector<std::size_t> first_basis_by_subsets(const Eigen::MatrixXd& m) {
  const auto p = static_cast<std::size_t>(m.cols());
  const int full = numeric_rank(m);
  std::vector<std::size_t> best;
  bool found = false;
  for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
    if (std::popcount(mask) != full) continue;
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < p; ++j)
      if (mask & (1u << j)) cols.push_back(j);
    Eigen::MatrixXd sub(m.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = m.col(static_cast<Eigen::Index>(cols[c]));
    if (numeric_rank(sub) != full) continue;
    if (!found || cols < best) best = cols, found = true;
  }
  return best;
}

inline double distance_to_segment(const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& a,
                                  const Eigen::RowVectorXd& b) {
  const Eigen::RowVectorXd ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (x - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

// (#concordant + 0.5 #tied) / (n_pos n_neg) over all positive/negative pairs.
inline double auc_concordance(const std::vector<double>& s, const std::vector<int>& y) {
  double num = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[i] == 1 && y[j] == -1) {
        pairs += 1;
        num += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
      }
  return num / pairs;
}

struct Pt {
  double fpr, tpr;
};

// One point per distinct threshold: predict faulty when score >= t.
inline std::vector<Pt> roc_by_thresholds(const std::vector<double>& s, const std::vector<int>& y) {
  std::vector<double> th(s);
  std::sort(th.begin(), th.end(), std::greater<>());
  th.erase(std::unique(th.begin(), th.end()), th.end());
  double np = 0, nn = 0;
  for (int v : y) (v == 1 ? np : nn) += 1;
  std::vector<Pt> out{{0.0, 0.0}};
  for (double t : th) {
    double tp = 0, fp = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] >= t) (y[i] == 1 ? tp : fp) += 1;
    out.push_back({fp / nn, tp / np});
  }
  return out;
}

// A point is a hull vertex when no pair of other points spanning its fpr
// reaches it from above or on the chord. The two endpoints always stay.
inline std::vector<Pt> hull_by_pairs(const std::vector<Pt>& pts) {
  std::vector<Pt> out;
  for (std::size_t q = 0; q < pts.size(); ++q) {
    if (q == 0 || q + 1 == pts.size()) {
      out.push_back(pts[q]);
      continue;
    }
    bool vertex = true;
    for (std::size_t a = 0; a < pts.size() && vertex; ++a)
      for (std::size_t b = 0; b < pts.size() && vertex; ++b) {
        if (a == q || b == q) continue;
        const auto &A = pts[a], &B = pts[b], &Q = pts[q];
        if (A.fpr == Q.fpr && A.tpr >= Q.tpr && a != q) vertex = false;
        if (!(A.fpr <= Q.fpr && Q.fpr <= B.fpr && A.fpr < B.fpr)) continue;
        const double y = A.tpr + (B.tpr - A.tpr) * (Q.fpr - A.fpr) / (B.fpr - A.fpr);
        if (Q.tpr <= y + 1e-12) vertex = false;
      }
    if (vertex) out.push_back(pts[q]);
  }
  return out;
}

// Midpoint rule on a uniform cost grid. Q(c) is minimised over every ROC
// point, which needs no hull.
inline double h_by_quadrature(const std::vector<double>& s, const std::vector<int>& y, double alpha, double beta,
                              int grid = 1000000) {
  const auto pts = roc_by_thresholds(s, y);
  double np = 0;
  for (int v : y) np += v == 1;
  const double pi1 = np / static_cast<double>(y.size()), pi0 = 1.0 - pi1;
  const double norm = std::tgamma(alpha + beta) / (std::tgamma(alpha) * std::tgamma(beta));
  double loss = 0, ref = 0;
  for (int i = 0; i < grid; ++i) {
    const double c = (i + 0.5) / grid;
    const double w = norm * std::pow(c, alpha - 1) * std::pow(1 - c, beta - 1);
    double q = 1e300;
    for (const auto& p : pts) q = std::min(q, c * pi1 * (1 - p.tpr) + (1 - c) * pi0 * p.fpr);
    loss += q * w;
    ref += std::min(c * pi1, (1 - c) * pi0) * w;
  }
  return 1.0 - loss / ref;
}

// Range of k iid standard normals: P(W <= w) = k * int phi(z) [Phi(z) - Phi(z - w)]^(k-1) dz.
inline double range_cdf(double w, int k) {
  const boost::math::normal_distribution<> nd;
  const int steps = 4000;
  const double lo = -9.0, hi = 9.0, h = (hi - lo) / steps;
  double sum = 0;
  for (int i = 0; i <= steps; ++i) {
    const double z = lo + i * h;
    const double f = boost::math::pdf(nd, z) * std::pow(boost::math::cdf(nd, z) - boost::math::cdf(nd, z - w), k - 1);
    sum += (i == 0 || i == steps ? 1 : (i % 2 ? 4 : 2)) * f;
  }
  return k * sum * h / 3.0;
}

// Upper alpha quantile of the range, divided by sqrt 2.
inline double nemenyi_q_by_quadrature(int k, double alpha = 0.05) {
  double lo = 0.0, hi = 10.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (range_cdf(mid, k) < 1.0 - alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / std::sqrt(2.0);
}

// Friedman statistic without tie correction on a k x N table of ranks.
inline double friedman_stat_from_ranks(const std::vector<std::vector<double>>& ranks_by_dataset, int k) {
  const auto n = static_cast<double>(ranks_by_dataset.size());
  std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
  for (const auto& col : ranks_by_dataset)
    for (int i = 0; i < k; ++i) sum[static_cast<std::size_t>(i)] += col[static_cast<std::size_t>(i)];
  double ss = 0;
  for (double r : sum) ss += r * r;
  return 12.0 / (n * k * (k + 1)) * ss - 3.0 * n * (k + 1);
}

// Exact permutation p-value: every dataset's ranks permuted independently.
inline double friedman_exact_p(const std::vector<std::vector<double>>& observed, int k) {
  const double stat = friedman_stat_from_ranks(observed, k);
  std::vector<double> base(static_cast<std::size_t>(k));
  std::iota(base.begin(), base.end(), 1.0);
  std::vector<std::vector<double>> perms;
  do perms.push_back(base);
  while (std::next_permutation(base.begin(), base.end()));
  const std::size_t n = observed.size();
  std::vector<std::size_t> idx(n, 0);
  std::size_t hit = 0, total = 0;
  for (;;) {
    std::vector<std::vector<double>> table(n);
    for (std::size_t j = 0; j < n; ++j) table[j] = perms[idx[j]];
    ++total;
    if (friedman_stat_from_ranks(table, k) >= stat - 1e-9) ++hit;
    std::size_t j = 0;
    while (j < n && ++idx[j] == perms.size()) idx[j++] = 0;
    if (j == n) break;
  }
  return static_cast<double>(hit) / static_cast<double>(total);
}

// Two-sided signed-rank p by walking all 2^n sign patterns in Gray-code order.
inline double wilcoxon_exact_by_enumeration(const std::vector<double>& ranks, double w_plus) {
  const std::size_t n = ranks.size();
  double w = 0;  // all signs negative
  std::uint64_t lower = 0, upper = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<bool> positive(n, false);
  for (std::uint64_t g = 0; g < total; ++g) {
    if (g > 0) {
      const auto bit = static_cast<std::size_t>(std::countr_zero(g));
      positive[bit] = !positive[bit];
      w += positive[bit] ? ranks[bit] : -ranks[bit];
    }
    if (w <= w_plus + 1e-9) ++lower;
    if (w >= w_plus - 1e-9) ++upper;
  }
  return std::min(1.0, 2.0 * static_cast<double>(std::min(lower, upper)) / static_cast<double>(total));
}

// Midranks of |d| in ascending order.
inline std::vector<double> abs_midranks(const std::vector<double>& d) {
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(d[a]) < std::abs(d[b]); });
  std::vector<double> r(d.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && std::abs(d[order[j]]) == std::abs(d[order[i]])) ++j;
    for (std::size_t t = i; t < j; ++t) r[order[t]] = 0.5 * static_cast<double>(i + 1 + j);
    i = j;
  }
  return r;
}

}  // namespace oracle
