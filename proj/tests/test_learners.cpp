#include "defectbench/error.hpp"
#include "defectbench/learners.hpp"
#include "defectbench/sampling.hpp"
#include "defectbench/seed.hpp"
#include "helpers.hpp"
#include "models.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace defectbench;
using learn::Algorithm;
using learn::ClassifierSpec;

namespace {

std::vector<double> as_vec(const data::Vector& v) { return {v.data(), v.data() + v.size()}; }

// Noisy XOR-like labels: not linearly separable.
data::Dataset nonlinear(std::size_t n, std::uint64_t seed) {
  detail::Rng rng(seed);
  data::Dataset d;
  d.name = "xor";
  d.features.resize(static_cast<Eigen::Index>(n), 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2 * rng.uniform() - 1, b = 2 * rng.uniform() - 1;
    d.features.row(static_cast<Eigen::Index>(i)) << a, b;
    int y = a * b > 0 ? 1 : -1;
    if (rng.uniform() < 0.1) y = -y;
    d.labels.push_back(y);
  }
  d.feature_names = {"a", "b"};
  d.synthetic.assign(n, 0);
  return d;
}

}  // namespace

TEST(Spec, ValidationAndDescribe) {
  EXPECT_THROW((ClassifierSpec{Algorithm::cart, {{"min_leaf", 0}}}.validate()), ArgumentError);
  EXPECT_THROW((ClassifierSpec{Algorithm::knn, {{"k", 0}}}.validate()), ArgumentError);
  EXPECT_THROW((ClassifierSpec{Algorithm::ridge_regression, {{"lambda", -1}}}.validate()), ArgumentError);
  EXPECT_THROW((ClassifierSpec{Algorithm::knn, {{"depth", 3}}}.validate()), ArgumentError);
  EXPECT_THROW((ClassifierSpec{Algorithm::knn, {{"k", 2.5}}}.validate()), ArgumentError);
  EXPECT_NO_THROW((ClassifierSpec{Algorithm::ridge_regression, {{"lambda", 0}}}.validate()));
  EXPECT_EQ((ClassifierSpec{Algorithm::cart, {{"min_leaf", 5}}}.describe()), "cart(min_leaf=5)");
  EXPECT_EQ(learn::algorithm_from_string("random_forest"), Algorithm::random_forest);
  EXPECT_THROW(learn::algorithm_from_string("svm_rbf"), ArgumentError);
}

TEST(Spec, DefaultGrids) {
  EXPECT_EQ(learn::default_grid(Algorithm::cart, 1200).candidates.size(), 12u);
  EXPECT_EQ(learn::default_grid(Algorithm::knn, 100).candidates.size(), 8u);
  EXPECT_EQ(learn::default_grid(Algorithm::ridge_regression, 100).candidates.size(), 10u);
  EXPECT_EQ(learn::default_grid(Algorithm::logistic_regression, 100).candidates.size(), 1u);
  EXPECT_EQ(learn::default_grid(Algorithm::random_forest, 100).candidates.size(), 8u);
  for (auto a : learn::all_algorithms()) EXPECT_NO_THROW(learn::default_grid(a, 40).validate());
}

TEST(Ridge, LambdaZeroIsOls) {
  auto d = testutil::blobs(40, 60, 4, 1.0, 3);
  const auto m = learn::fit({Algorithm::ridge_regression, {{"lambda", 0}}}, d, 1);
  const auto s = learn::predict_scores(m, d.features);
  Eigen::MatrixXd a(100, 5);
  a << Eigen::VectorXd::Ones(100), d.features;
  Eigen::VectorXd y(100);
  for (int i = 0; i < 100; ++i) y(i) = d.labels[static_cast<std::size_t>(i)];
  const Eigen::VectorXd beta = a.colPivHouseholderQr().solve(y);
  EXPECT_LT((a * beta - s).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Knn, OneNeighbourReproducesTraining) {
  auto d = testutil::blobs(20, 30, 3, 0.5, 4);
  const auto m = learn::fit({Algorithm::knn, {{"k", 1}}}, d, 1);
  const auto s = learn::predict_scores(m, d.features);
  for (std::size_t i = 0; i < d.rows(); ++i) EXPECT_EQ(s(static_cast<Eigen::Index>(i)), d.labels[i]);
}

TEST(Logistic, SeparableBlobs) {
  auto d = testutil::blobs(100, 100, 2, 8.0, 5);
  const auto m = learn::fit({Algorithm::logistic_regression, {}}, d, 1);
  EXPECT_GE(metrics::auc(as_vec(learn::predict_scores(m, d.features)), d.labels), 0.999);
}

TEST(NaiveBayes, SymmetricMidpointScoresZero) {
  // Mirror-image classes around the origin with equal priors.
  auto half = testutil::blobs(50, 0, 2, 2.0, 6);
  data::Dataset d;
  d.features.resize(100, 2);
  d.features << half.features, -half.features;
  d.labels.assign(100, -1);
  std::fill(d.labels.begin(), d.labels.begin() + 50, 1);
  d.feature_names = {"a", "b"};
  d.synthetic.assign(100, 0);
  const auto m = learn::fit({Algorithm::gaussian_naive_bayes, {}}, d, 1);
  const Eigen::MatrixXd mid = Eigen::MatrixXd::Zero(1, 2);
  EXPECT_NEAR(learn::predict_scores(m, mid)(0), 0.0, 1e-9);
  const Eigen::MatrixXd x = d.features.topRows(1);
  EXPECT_GT(learn::predict_scores(m, x)(0), 0.0);
}

TEST(Forest, ScoresAreVoteFractions) {
  auto d = testutil::blobs(30, 70, 3, 1.0, 7);
  const auto m = learn::fit({Algorithm::random_forest, {{"n_trees", 20}}}, d, 9);
  const auto s = learn::predict_scores(m, d.features);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    EXPECT_GE(s(i), 0.0);
    EXPECT_LE(s(i), 1.0);
    EXPECT_NEAR(s(i) * 20, std::round(s(i) * 20), 1e-12);
  }
}

TEST(Forest, SingleTreeIsBootstrapCart) {
  auto d = testutil::blobs(15, 25, 3, 1.0, 8);
  const std::uint64_t seed = 21;
  const auto m = learn::fit({Algorithm::random_forest, {{"n_trees", 1}, {"max_features", 1.0}, {"min_leaf", 2}}}, d,
                            seed);
  const auto& forest = dynamic_cast<const learn::detail::ForestModel&>(m.model());
  ASSERT_EQ(forest.trees().size(), 1u);

  const Eigen::MatrixXd z = m.scaler().transform(d.features);
  detail::Rng rng(child_seed(seed, 0));
  const auto rows = learn::detail::bootstrap_rows(d.rows(), rng);
  const auto cart = learn::detail::DecisionTree::grow(z, d.labels, rows, {2, 0, 0}, rng);
  const auto& a = forest.trees()[0].nodes();
  const auto& b = cart.nodes();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].feature, b[i].feature);
    EXPECT_EQ(a[i].threshold, b[i].threshold);
    EXPECT_EQ(a[i].count, b[i].count);
    EXPECT_EQ(a[i].positive_fraction, b[i].positive_fraction);
  }
}

TEST(Cart, MinLeafAndDepthRespected) {
  auto d = nonlinear(300, 9);
  const auto m = learn::fit({Algorithm::cart, {{"min_leaf", 10}}}, d, 1);
  const auto& t = dynamic_cast<const learn::detail::TreeModel&>(m.model()).tree();
  for (const auto& n : t.nodes())
    if (n.feature < 0) EXPECT_GE(n.count, 10u);
  const auto stump = learn::fit({Algorithm::cart, {{"max_depth", 1}}}, d, 1);
  EXPECT_LE(dynamic_cast<const learn::detail::TreeModel&>(stump.model()).tree().depth(), 1);
}

TEST(AdaBoost, StagesMatchBruteForce) {
  auto d = testutil::blobs(8, 12, 2, 1.0, 10);
  const int rounds = 6;
  const auto m = learn::fit({Algorithm::adaboost, {{"rounds", rounds}}}, d, 1);
  const auto& stages = dynamic_cast<const learn::detail::AdaBoostModel&>(m.model()).stages();
  ASSERT_FALSE(stages.empty());
  const Eigen::MatrixXd z = m.scaler().transform(d.features);
  const auto n = static_cast<std::size_t>(z.rows());
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  for (const auto& st : stages) {
    // Lowest weighted error over every feature, midpoint threshold and polarity.
    double best = 1e300;
    for (Eigen::Index f = 0; f < z.cols(); ++f) {
      std::vector<double> v(z.col(f).data(), z.col(f).data() + z.rows());
      std::sort(v.begin(), v.end());
      for (std::size_t t = 0; t + 1 < v.size(); ++t) {
        if (!(v[t] < v[t + 1])) continue;
        const double thr = 0.5 * (v[t] + v[t + 1]);
        for (int pol : {1, -1}) {
          double err = 0;
          for (std::size_t i = 0; i < n; ++i)
            if ((z(static_cast<Eigen::Index>(i), f) > thr ? pol : -pol) != d.labels[i]) err += w[i];
          best = std::min(best, err);
        }
      }
    }
    double err = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (st.predict(z.row(static_cast<Eigen::Index>(i))) != d.labels[i]) err += w[i];
    EXPECT_NEAR(err, best, 1e-12);
    const double eps = std::max(err, 1e-10);
    EXPECT_NEAR(st.alpha, std::log((1 - eps) / eps), 1e-9);
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (st.predict(z.row(static_cast<Eigen::Index>(i))) == d.labels[i]) w[i] *= eps / (1 - eps);
      total += w[i];
    }
    for (auto& x : w) x /= total;
  }
  // sign(score) is the alpha-weighted majority vote.
  const auto s = learn::predict_scores(m, d.features);
  for (std::size_t i = 0; i < n; ++i) {
    double plus = 0, minus = 0;
    for (const auto& st : stages) (st.predict(z.row(static_cast<Eigen::Index>(i))) > 0 ? plus : minus) += st.alpha;
    if (plus != minus) EXPECT_EQ(s(static_cast<Eigen::Index>(i)) > 0, plus > minus);
  }
}

TEST(AllLearners, DeterministicFiniteAndDimensionChecked) {
  auto d = testutil::blobs(30, 70, 3, 1.5, 11);
  auto test = testutil::blobs(10, 10, 3, 1.5, 12);
  for (auto a : learn::all_algorithms()) {
    ClassifierSpec spec{a, {}};
    if (a == Algorithm::random_forest) spec.params["n_trees"] = 10;
    if (a == Algorithm::mlp) spec.params["epochs"] = 100;
    const auto m1 = learn::fit(spec, d, 5);
    const auto m2 = learn::fit(spec, d, 5);
    const auto s1 = learn::predict_scores(m1, test.features);
    EXPECT_EQ(s1, learn::predict_scores(m2, test.features)) << learn::to_string(a);
    EXPECT_TRUE(s1.allFinite());
    if (a != Algorithm::constant)
      EXPECT_GT(metrics::auc(as_vec(s1), test.labels), 0.75) << learn::to_string(a);
    EXPECT_THROW(learn::predict_scores(m1, Eigen::MatrixXd::Zero(2, 4)), ArgumentError);
  }
}

TEST(Selection, SingleCandidateNeedsNoFitting) {
  auto d = testutil::blobs(3, 3, 1, 0.0, 1);  // too small for inner folds
  learn::CandidateGrid g{Algorithm::logistic_regression, {{Algorithm::logistic_regression, {}}}};
  EXPECT_EQ(learn::select_candidate(g, d, 5, metrics::Metric::auc, 1), g.candidates[0]);
}

TEST(Selection, ArgmaxAndExhaustiveOracle) {
  auto d = nonlinear(300, 13);
  learn::CandidateGrid g{Algorithm::knn, {{Algorithm::knn, {{"k", 1}}}, {Algorithm::knn, {{"k", 201}}}}};
  const std::uint64_t seed = 77;
  learn::SelectionTrace trace;
  const auto chosen = learn::select_candidate(g, d, 5, metrics::Metric::auc, seed, &trace);

  // Offline: rebuild the same inner folds and evaluate both candidates.
  const auto plan = sampling::stratified_folds(d.labels, 5, child_seed(seed, 0));
  EXPECT_EQ(plan.assignment, trace.inner_assignment);
  std::vector<double> mean(2, 0.0);
  for (int f = 0; f < 5; ++f) {
    const auto tr = d.select_rows(plan.train_indices(f));
    const auto te = d.select_rows(plan.test_indices(f));
    // Inner folds tile the training split.
    EXPECT_EQ(tr.rows() + te.rows(), d.rows());
    for (std::size_t c = 0; c < 2; ++c) {
      const auto m = learn::fit(g.candidates[c], tr, child_seed(seed, static_cast<std::uint64_t>(f) + 1));
      mean[c] += metrics::auc(as_vec(learn::predict_scores(m, te.features)), te.labels) / 5.0;
    }
  }
  EXPECT_NEAR(trace.mean_metric[0], mean[0], 1e-12);
  EXPECT_NEAR(trace.mean_metric[1], mean[1], 1e-12);
  EXPECT_EQ(chosen, g.candidates[mean[1] > mean[0] ? 1 : 0]);

  learn::CandidateGrid carts{Algorithm::cart,
                             {{Algorithm::cart, {{"min_leaf", 1}}}, {Algorithm::cart, {{"min_leaf", 250}}}}};
  auto big = nonlinear(500, 14);
  learn::SelectionTrace t2;
  const auto pick = learn::select_candidate(carts, big, 5, metrics::Metric::auc, 3, &t2);
  EXPECT_GE(t2.mean_metric[t2.chosen], t2.mean_metric[1 - t2.chosen]);
  EXPECT_EQ(pick, carts.candidates[t2.chosen]);
}

TEST(Selection, TiesGoToEarliestCandidate) {
  auto d = testutil::blobs(20, 30, 2, 1.0, 15);
  learn::CandidateGrid g{Algorithm::constant, {{Algorithm::constant, {}}, {Algorithm::constant, {}}}};
  learn::SelectionTrace t;
  learn::select_candidate(g, d, 5, metrics::Metric::h, 1, &t);
  EXPECT_EQ(t.chosen, 0u);
}
