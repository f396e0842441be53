#include "defectbench/error.hpp"
#include "defectbench/stattests.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace defectbench;
using namespace defectbench::stats;

namespace {

MetricMatrix make(const std::vector<std::vector<double>>& rows) {
  MetricMatrix m;
  m.metric = "auc";
  m.name = "m";
  m.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.classifiers.push_back("c" + std::to_string(i));
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  for (std::size_t j = 0; j < rows[0].size(); ++j) m.datasets.push_back("d" + std::to_string(j));
  return m;
}

}  // namespace

TEST(Ingest, FixtureShapes) {
  const auto a = ingest_metric_matrix(testutil::fixture("mdp_auc.csv"), "auc");
  EXPECT_EQ(a.k(), 17u);
  EXPECT_EQ(a.n(), 12u);
  EXPECT_EQ(a.name, "mdp_auc");
  const auto h = ingest_metric_matrix(testutil::fixture("github_h.csv"), "h");
  EXPECT_EQ(h.k(), 17u);
  EXPECT_EQ(h.n(), 15u);
}

TEST(Ingest, ErrorsNameLocation) {
  testutil::TempDir tmp("ingest");
  const auto p = tmp.path() / "blank.csv";
  testutil::write_file(p, "classifier,d1,d2\nA,0.5,0.6\nB,,0.7\n");
  try {
    ingest_metric_matrix(p);
    FAIL();
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'d1'"), std::string::npos) << msg;
  }
  testutil::write_file(p, "classifier,d1,d2\nA,0.5,0.6\nA,0.1,0.7\n");
  EXPECT_THROW(ingest_metric_matrix(p), DataError);
  testutil::write_file(p, "classifier,d1,d2\nA,0.5,x\nB,0.1,0.7\n");
  EXPECT_THROW(ingest_metric_matrix(p), DataError);
  testutil::write_file(p, "name,d1,d2\nA,0.5,0.4\nB,0.1,0.7\n");
  EXPECT_THROW(ingest_metric_matrix(p), DataError);
}

TEST(Ingest, WriteRoundTrip) {
  testutil::TempDir tmp("roundtrip");
  auto m = make({{0.1 / 3, 0.7}, {1e-17, 0.123456789012345678}});
  write_metric_matrix(m, tmp.path() / "m_auc.csv");
  const auto back = ingest_metric_matrix(tmp.path() / "m_auc.csv", "auc");
  EXPECT_EQ(back.values, m.values);
}

TEST(Ranks, BasicsAndInvariance) {
  const auto r = average_ranks(make({{0.9, 0.9, 0.9}, {0.8, 0.8, 0.8}}));
  EXPECT_EQ(r.average, (std::vector<double>{1.0, 2.0}));
  auto m = make({{0.9, 0.5, 0.7}, {0.8, 0.5, 0.9}, {0.1, 0.6, 0.7}});
  const auto base = average_ranks(m);
  for (Eigen::Index j = 0; j < base.ranks.cols(); ++j) EXPECT_DOUBLE_EQ(base.ranks.col(j).sum(), 6.0);
  EXPECT_DOUBLE_EQ(base.ranks(0, 1), 2.5);
  m.values.col(2) = m.values.col(2).array().exp() * 3.0;
  EXPECT_EQ(average_ranks(m).average, base.average);
}

TEST(Ranks, FixtureAnchors) {
  const auto r = average_ranks(ingest_metric_matrix(testutil::fixture("mdp_auc.csv"), "auc"));
  const auto idx = [&](const std::string& n) {
    return static_cast<std::size_t>(std::find(r.classifiers.begin(), r.classifiers.end(), n) - r.classifiers.begin());
  };
  EXPECT_EQ(r.average[idx("CARTModel")], 17.0);
  EXPECT_NEAR(r.average[idx("RFModelR")], 2.8, 0.1);
}

TEST(Friedman, IdenticalRowsAndKTwo) {
  const auto r = friedman_test(make({{0.5, 0.6, 0.7}, {0.5, 0.6, 0.7}, {0.5, 0.6, 0.7}}));
  EXPECT_EQ(r.chi_square, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.df, 2);
  EXPECT_THROW(friedman_test(make({{0.5, 0.6}, {0.4, 0.7}})), ArgumentError);
}

TEST(Friedman, ChiSquareNearExactPermutation) {
  // Rank sums (5, 7, 12) over four datasets; statistic 6.5.
  const auto m = make({{0.9, 0.9, 0.9, 0.8}, {0.8, 0.8, 0.8, 0.9}, {0.1, 0.2, 0.3, 0.4}});
  const auto r = friedman_test(m);
  EXPECT_NEAR(r.chi_square, 6.5, 1e-12);
  const std::vector<std::vector<double>> ranks{{1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {2, 1, 3}};
  const double exact = oracle::friedman_exact_p(ranks, 3);
  EXPECT_NEAR(r.p_value, exact, 0.01) << "exact " << exact;
}

TEST(Friedman, InvariantUnderRowPermutation) {
  auto m = make({{0.9, 0.5, 0.7, 0.2}, {0.8, 0.55, 0.9, 0.3}, {0.1, 0.6, 0.7, 0.1}, {0.3, 0.3, 0.3, 0.9}});
  const auto a = friedman_test(m);
  m.values.row(0).swap(m.values.row(3));
  EXPECT_NEAR(friedman_test(m).chi_square, a.chi_square, 1e-12);
}

TEST(Nemenyi, TableAnchorsAndQuadrature) {
  EXPECT_EQ(nemenyi_q(5), 2.728);
  EXPECT_EQ(nemenyi_q(17), 3.458);
  for (int k = 2; k <= 20; ++k) EXPECT_NEAR(nemenyi_q(k), oracle::nemenyi_q_by_quadrature(k), 0.002) << "k=" << k;
  EXPECT_THROW(nemenyi_q(21), ArgumentError);
  EXPECT_THROW(nemenyi_q(1), ArgumentError);
  EXPECT_THROW(nemenyi_q(5, 0.1), ArgumentError);
}

TEST(Nemenyi, CriticalDistance) {
  EXPECT_NEAR(critical_distance(17, 12, 3.458), 7.13, 0.01);
  EXPECT_NEAR(critical_distance(17, 15, 3.458), 6.38, 0.01);
  EXPECT_NEAR(critical_distance(5, 15, 2.728), 1.58, 0.01);
  EXPECT_LT(critical_distance(5, 20, 2.728), critical_distance(5, 15, 2.728));
  EXPECT_GT(critical_distance(6, 15, nemenyi_q(6)), critical_distance(5, 15, nemenyi_q(5)));
}

TEST(Nemenyi, InclusiveBoundary) {
  RankTable t{{"a", "b", "c"}, {1.0, 2.60, 2.58}, {}};
  const auto pairs = nemenyi_pairwise(t, 1.58);
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_TRUE(pairs[0].significant);   // gap 1.60
  EXPECT_TRUE(pairs[1].significant);   // gap 1.58
  EXPECT_FALSE(pairs[2].significant);  // gap 0.02
}

TEST(Wilcoxon, Basics) {
  const std::vector<double> a{0.1, 0.2, 0.3, 0.4, 0.5};
  const auto same = wilcoxon_signed_rank(a, a);
  EXPECT_EQ(same.p_value, 1.0);
  EXPECT_TRUE(same.degenerate);
  std::vector<double> x(12), y(12, 0.0);
  for (int i = 0; i < 12; ++i) x[static_cast<std::size_t>(i)] = 0.01 * (i + 1);
  const auto all_pos = wilcoxon_signed_rank(x, y);
  EXPECT_TRUE(all_pos.exact);
  EXPECT_NEAR(all_pos.p_value, 2.0 / 4096.0, 1e-15);
  EXPECT_THROW(wilcoxon_signed_rank(std::vector<double>{1, 2, 3}, std::vector<double>{0, 0, 0}), ArgumentError);
}

TEST(Wilcoxon, ExactMatchesEnumerationWithTies) {
  detail::Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 5 + rng.index(10);
    std::vector<double> a(n), b(n, 0.0);
    for (auto& v : a) v = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (1 + static_cast<double>(rng.index(6)));
    const auto r = wilcoxon_signed_rank(a, b, WilcoxonMethod::exact);
    EXPECT_NEAR(r.p_value, oracle::wilcoxon_exact_by_enumeration(oracle::abs_midranks(a), r.statistic), 1e-12);
  }
}

TEST(Wilcoxon, NormalApproximationNearExact) {
  detail::Rng rng(32);
  for (std::size_t n : {20u, 25u}) {
    std::vector<double> a(n), b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) a[i] = (rng.uniform() < 0.35 ? -1.0 : 1.0) * (0.01 + rng.uniform());
    const auto approx = wilcoxon_signed_rank(a, b, WilcoxonMethod::normal);
    const double exact = oracle::wilcoxon_exact_by_enumeration(oracle::abs_midranks(a), approx.statistic);
    EXPECT_NEAR(approx.p_value, exact, 0.01) << "n=" << n;
    EXPECT_NEAR(wilcoxon_signed_rank(a, b, WilcoxonMethod::exact).p_value, exact, 1e-12);
  }
}

TEST(Bayes, SanityCases) {
  const std::vector<double> a{0.7, 0.8, 0.75, 0.9, 0.6, 0.85};
  BayesOptions opts;
  opts.seed = 5;
  const auto same = bayesian_rope_test(a, a, {-0.01, 0.01}, opts);
  EXPECT_GT(same.p_rope, 0.99);
  EXPECT_EQ(same.verdict, Verdict::practically_equivalent);
  std::vector<double> shifted(a);
  for (auto& v : shifted) v += 0.2;
  const auto right = bayesian_rope_test(shifted, a, {-0.01, 0.01}, opts);
  EXPECT_GT(right.p_right, 0.99);
  EXPECT_EQ(right.verdict, Verdict::right_wins);
  const auto left = bayesian_rope_test(a, shifted, {-0.01, 0.01}, opts);
  EXPECT_EQ(left.verdict, Verdict::left_wins);
  EXPECT_NEAR(right.p_left + right.p_rope + right.p_right, 1.0, 1e-9);
}

TEST(Bayes, DeterministicAndRopeMonotone) {
  detail::Rng rng(8);
  std::vector<double> a(12), b(12);
  for (std::size_t i = 0; i < 12; ++i) {
    b[i] = rng.uniform();
    a[i] = b[i] + 0.03 * rng.normal() + 0.01;
  }
  BayesOptions opts;
  opts.seed = 99;
  const auto r1 = bayesian_rope_test(a, b, {-0.01, 0.01}, opts);
  const auto r2 = bayesian_rope_test(a, b, {-0.01, 0.01}, opts);
  EXPECT_EQ(r1.p_right, r2.p_right);
  EXPECT_EQ(r1.p_rope, r2.p_rope);
  double last = -1;
  for (double w : {0.001, 0.005, 0.01, 0.02, 0.05, 0.1}) {
    const auto r = bayesian_rope_test(a, b, {-w, w}, opts);
    EXPECT_GE(r.p_rope, last);
    last = r.p_rope;
  }
}

TEST(Bayes, RejectsBadArguments) {
  const std::vector<double> a{1, 2, 3}, b{1, 2, 4};
  BayesOptions small;
  small.mc_samples = 999;
  EXPECT_THROW(bayesian_rope_test(a, b, {-0.01, 0.01}, small), ArgumentError);
  EXPECT_THROW(bayesian_rope_test(a, b, {0.01, 0.02}), ArgumentError);
  EXPECT_THROW(bayesian_rope_test(a, std::vector<double>{1, 2}, {-0.01, 0.01}), ArgumentError);
}
