#include "defectbench/error.hpp"
#include "defectbench/metrics.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace defectbench;
using namespace defectbench::metrics;

namespace {

struct Instance {
  std::vector<double> s;
  std::vector<int> y;
};

// Scores on a coarse grid so that ties occur within and across classes.
Instance random_instance(detail::Rng& rng, std::size_t max_n = 50) {
  Instance in;
  const std::size_t n = 2 + rng.index(max_n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    in.s.push_back(std::round(rng.uniform() * 12.0) / 4.0);
    in.y.push_back(rng.uniform() < 0.4 ? 1 : -1);
  }
  in.y[0] = 1;
  in.y[1] = -1;
  return in;
}

}  // namespace

TEST(Roc, SmallCases) {
  const auto c = roc_points(std::vector<double>{0.9, 0.1}, std::vector<int>{1, -1});
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[1].fpr, 0.0);
  EXPECT_EQ(c[1].tpr, 1.0);
  EXPECT_TRUE(std::isinf(c[0].threshold));
  const auto flat = roc_points(std::vector<double>{1, 1, 1}, std::vector<int>{1, -1, 1});
  ASSERT_EQ(flat.size(), 2u);
  EXPECT_EQ(flat[1].fpr, 1.0);
  EXPECT_EQ(flat[1].tpr, 1.0);
  EXPECT_THROW(roc_points(std::vector<double>{1, 2}, std::vector<int>{1, 1}), Error);
  EXPECT_THROW(roc_points(std::vector<double>{1}, std::vector<int>{1, -1}), Error);
}

TEST(Roc, MatchesThresholdEnumeration) {
  detail::Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    auto in = random_instance(rng);
    const auto c = roc_points(in.s, in.y);
    const auto o = oracle::roc_by_thresholds(in.s, in.y);
    ASSERT_EQ(c.size(), o.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      EXPECT_NEAR(c[i].fpr, o[i].fpr, 1e-15);
      EXPECT_NEAR(c[i].tpr, o[i].tpr, 1e-15);
    }
    EXPECT_EQ(c.back().fpr, 1.0);
    EXPECT_EQ(c.back().tpr, 1.0);
  }
}

TEST(Auc, Examples) {
  EXPECT_EQ(auc(std::vector<double>{3, 2, 1}, std::vector<int>{1, 1, -1}), 1.0);
  EXPECT_EQ(auc(std::vector<double>{0, 0, 0, 0}, std::vector<int>{1, -1, -1, 1}), 0.5);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.9, 0.8, 0.7, 0.6}, std::vector<int>{1, -1, 1, -1}), 0.75);
}

TEST(Auc, ConcordanceTrapezoidAndOracleAgree) {
  detail::Rng rng(2);
  for (int t = 0; t < 500; ++t) {
    auto in = random_instance(rng);
    const double a = auc(in.s, in.y);
    EXPECT_NEAR(a, oracle::auc_concordance(in.s, in.y), 1e-12);
    EXPECT_NEAR(auc_trapezoid(in.s, in.y), a, 1e-12);
  }
}

TEST(Auc, MonotoneInvarianceAndFlip) {
  detail::Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    auto in = random_instance(rng);
    std::vector<double> g(in.s.size()), neg(in.s.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = std::exp(3 * in.s[i]) + 7;
      neg[i] = -in.s[i];
    }
    EXPECT_EQ(auc(g, in.y), auc(in.s, in.y));
    EXPECT_NEAR(auc(neg, in.y), 1 - auc(in.s, in.y), 1e-12);
  }
}

TEST(Hull, SimpleCases) {
  const RocCurve diag{{0, 0, 1}, {1, 1, 0}};
  EXPECT_EQ(roc_convex_hull(diag).size(), 2u);
  const RocCurve convex{{0, 0, 3}, {0.1, 0.6, 2}, {0.4, 0.9, 1}, {1, 1, 0}};
  const auto h = roc_convex_hull(convex);
  ASSERT_EQ(h.size(), convex.size());
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_EQ(h[i].fpr, convex[i].fpr);
}

TEST(Hull, MatchesPairwiseOracle) {
  detail::Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    Instance in;
    for (int i = 0; i < 40; ++i) {
      in.s.push_back(rng.uniform());
      in.y.push_back(rng.uniform() < 0.5 ? 1 : -1);
    }
    in.y[0] = 1;
    in.y[1] = -1;
    const auto curve = roc_points(in.s, in.y);
    const auto hull = roc_convex_hull(curve);
    std::vector<oracle::Pt> pts;
    for (const auto& p : curve) pts.push_back({p.fpr, p.tpr});
    const auto expect = oracle::hull_by_pairs(pts);
    ASSERT_EQ(hull.size(), expect.size());
    for (std::size_t i = 0; i < hull.size(); ++i) {
      EXPECT_EQ(hull[i].fpr, expect[i].fpr);
      EXPECT_EQ(hull[i].tpr, expect[i].tpr);
    }
  }
}

TEST(HMeasure, Extremes) {
  EXPECT_NEAR(h_measure(std::vector<double>{1, 1, 1, 1, 1}, std::vector<int>{1, -1, -1, 1, -1}), 0.0, 1e-12);
  EXPECT_NEAR(h_measure(std::vector<double>{5, 4, 1, 0}, std::vector<int>{1, 1, -1, -1}), 1.0, 1e-12);
  EXPECT_THROW(h_measure(std::vector<double>{1, 2}, std::vector<int>{-1, -1}), Error);
  EXPECT_THROW((CostWeighting{0, 2}.validate()), Error);
}

TEST(HMeasure, MatchesGridQuadrature) {
  detail::Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    auto in = random_instance(rng, 40);
    const double a = 1 + 2 * rng.uniform(), b = 1 + 2 * rng.uniform();
    const CostWeighting w = t % 2 ? CostWeighting{a, b} : CostWeighting{};
    EXPECT_NEAR(h_measure(in.s, in.y, w), oracle::h_by_quadrature(in.s, in.y, w.alpha, w.beta), 1e-6);
  }
}

TEST(HMeasure, MonotoneInvarianceAndRange) {
  detail::Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    auto in = random_instance(rng);
    std::vector<double> g(in.s.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = 2 * in.s[i] * in.s[i] * in.s[i] - 1;
    const double h = h_measure(in.s, in.y);
    EXPECT_EQ(h_measure(g, in.y), h);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, 1.0);
  }
}

TEST(HMeasure, HullLossNotAboveRawLoss) {
  detail::Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    auto in = random_instance(rng, 30);
    const auto d = h_measure_detail(in.s, in.y);
    // Raw-curve loss at 2000 cost values never undercuts the hull loss.
    const auto pts = oracle::roc_by_thresholds(in.s, in.y);
    double raw = 0;
    const int grid = 2000;
    for (int i = 0; i < grid; ++i) {
      const double c = (i + 0.5) / grid;
      double q = 1e300;
      for (const auto& p : pts) q = std::min(q, c * d.pi_positive * (1 - p.tpr) + (1 - c) * (1 - d.pi_positive) * p.fpr);
      raw += q * 6 * c * (1 - c) / grid;
    }
    EXPECT_LE(d.loss, raw + 1e-6);
  }
}

TEST(Pearson, Basics) {
  const std::vector<double> a{1, 2, 3, 5}, b{-1, -2, -3, -5};
  EXPECT_NEAR(pearson_correlation(a, a), 1.0, 1e-15);
  EXPECT_NEAR(pearson_correlation(a, b), -1.0, 1e-15);
  EXPECT_THROW(pearson_correlation(a, std::vector<double>{1, 1, 1, 1}), Error);
  EXPECT_THROW(pearson_correlation(std::vector<double>{1}, std::vector<double>{2}), Error);
  EXPECT_EQ(metric_from_string("auc"), Metric::auc);
  EXPECT_EQ(to_string(Metric::h), "h");
}
