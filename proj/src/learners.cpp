#include "defectbench/learners.hpp"

#include "defectbench/error.hpp"
#include "defectbench/seed.hpp"
#include "models.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace defectbench::learn {

using data::Matrix;
using data::Vector;

namespace {

struct ParamDef {
  const char* name;
  double fallback;
  double lo;
  double hi;
  bool integer;
  bool lo_exclusive;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<ParamDef>& param_defs(Algorithm a) {
  static const std::vector<ParamDef> none;
  static const std::vector<ParamDef> logistic{{"max_iter", 100, 1, 1e6, true, false},
                                              {"tol", 1e-8, 0, kInf, false, true},
                                              {"jitter", 1e-8, 0, kInf, false, false}};
  static const std::vector<ParamDef> ridge{{"lambda", 1.0, 0, kInf, false, false}};
  static const std::vector<ParamDef> bayes{{"var_smoothing", 1e-9, 0, kInf, false, false}};
  static const std::vector<ParamDef> knn{{"k", 5, 1, 1e9, true, false}};
  static const std::vector<ParamDef> cart{{"min_leaf", 1, 1, 1e9, true, false},
                                          {"max_depth", 0, 0, 1e6, true, false}};
  static const std::vector<ParamDef> forest{{"n_trees", 100, 1, 1e6, true, false},
                                            {"max_features", 0, 0, 1, false, false},
                                            {"min_leaf", 1, 1, 1e9, true, false}};
  static const std::vector<ParamDef> svm{{"C", 1.0, 0, kInf, false, true},
                                         {"max_iter", 1000, 1, 1e7, true, false},
                                         {"tol", 1e-3, 0, kInf, false, true}};
  static const std::vector<ParamDef> mlp{{"hidden", 5, 1, 1e5, true, false},
                                         {"learning_rate", 0.5, 0, kInf, false, true},
                                         {"epochs", 500, 1, 1e7, true, false},
                                         {"l2", 1e-4, 0, kInf, false, false}};
  static const std::vector<ParamDef> boost{{"rounds", 50, 1, 1e6, true, false}};
  switch (a) {
    case Algorithm::logistic_regression: return logistic;
    case Algorithm::ridge_regression: return ridge;
    case Algorithm::gaussian_naive_bayes: return bayes;
    case Algorithm::knn: return knn;
    case Algorithm::cart: return cart;
    case Algorithm::random_forest: return forest;
    case Algorithm::linear_svm: return svm;
    case Algorithm::mlp: return mlp;
    case Algorithm::adaboost: return boost;
    case Algorithm::constant: return none;
  }
  return none;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::logistic_regression: return "logistic_regression";
    case Algorithm::ridge_regression: return "ridge_regression";
    case Algorithm::gaussian_naive_bayes: return "gaussian_naive_bayes";
    case Algorithm::knn: return "knn";
    case Algorithm::cart: return "cart";
    case Algorithm::random_forest: return "random_forest";
    case Algorithm::linear_svm: return "linear_svm";
    case Algorithm::mlp: return "mlp";
    case Algorithm::adaboost: return "adaboost";
    case Algorithm::constant: return "constant";
  }
  return "?";
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all{Algorithm::logistic_regression, Algorithm::ridge_regression,
                                          Algorithm::gaussian_naive_bayes, Algorithm::knn,
                                          Algorithm::cart, Algorithm::random_forest,
                                          Algorithm::linear_svm, Algorithm::mlp,
                                          Algorithm::adaboost, Algorithm::constant};
  return all;
}

Algorithm algorithm_from_string(std::string_view name) {
  for (auto a : all_algorithms())
    if (to_string(a) == name) return a;
  throw ArgumentError("unknown algorithm '" + std::string(name) + "'");
}

void ClassifierSpec::validate() const {
  const auto& defs = param_defs(algorithm);
  for (const auto& [name, value] : params) {
    auto it = std::find_if(defs.begin(), defs.end(), [&](const ParamDef& d) { return name == d.name; });
    const std::string where = std::string(to_string(algorithm)) + "." + name;
    if (it == defs.end()) throw ArgumentError("unknown hyperparameter " + where);
    if (!std::isfinite(value)) throw ArgumentError(where + " must be finite");
    if (value < it->lo || (it->lo_exclusive && value == it->lo) || value > it->hi)
      throw ArgumentError(where + " = " + format_number(value) + " is out of range");
    if (it->integer && value != std::floor(value)) throw ArgumentError(where + " must be an integer");
  }
}

double ClassifierSpec::get(const std::string& name) const {
  if (auto it = params.find(name); it != params.end()) return it->second;
  for (const auto& d : param_defs(algorithm))
    if (name == d.name) return d.fallback;
  throw ArgumentError("unknown hyperparameter " + std::string(to_string(algorithm)) + "." + name);
}

std::string ClassifierSpec::describe() const {
  std::string out(to_string(algorithm));
  out += '(';
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) out += ';';
    out += k + "=" + format_number(v);
    first = false;
  }
  out += ')';
  return out;
}

void CandidateGrid::validate() const {
  if (candidates.empty()) throw ArgumentError("candidate grid for " + std::string(to_string(algorithm)) + " is empty");
  for (const auto& c : candidates) {
    if (c.algorithm != algorithm) throw ArgumentError("candidate grid mixes algorithms");
    c.validate();
  }
}

CandidateGrid default_grid(Algorithm a, std::size_t n_train) {
  CandidateGrid g{a, {}};
  auto add = [&](Hyperparameters p) { g.candidates.push_back({a, std::move(p)}); };
  switch (a) {
    case Algorithm::logistic_regression:
    case Algorithm::gaussian_naive_bayes:
    case Algorithm::constant:
      add({});
      break;
    case Algorithm::ridge_regression:
      for (int e = -3; e <= 6; ++e) add({{"lambda", std::pow(10.0, e)}});
      break;
    case Algorithm::knn:
      for (int k : {1, 3, 5, 7, 9, 11, 15, 21}) add({{"k", k}});
      break;
    case Algorithm::cart: {
      // 12 log-spaced min_leaf values from 1 to n/10, nudged upward where
      // rounding would repeat a value.
      const double top = std::max(1.0, std::floor(static_cast<double>(n_train) / 10.0));
      double last = 0;
      for (int i = 0; i < 12; ++i) {
        const double v = std::min(top, std::max(std::round(std::exp(std::log(top) * i / 11.0)), last + 1));
        if (v > last) add({{"min_leaf", v}});
        last = std::max(last, v);
      }
      break;
    }
    case Algorithm::random_forest:
      for (int trees : {50, 100, 250, 500})
        for (double frac : {0.0, 0.5}) add({{"n_trees", trees}, {"max_features", frac}});
      break;
    case Algorithm::linear_svm:
      for (int e = -3; e <= 3; ++e) add({{"C", std::pow(10.0, e)}});
      break;
    case Algorithm::mlp:
      for (int h : {2, 5, 10})
        for (double lr : {0.1, 0.5}) add({{"hidden", h}, {"learning_rate", lr}});
      break;
    case Algorithm::adaboost:
      for (int r : {50, 100, 200}) add({{"rounds", r}});
      break;
  }
  return g;
}

TrainedModel::TrainedModel(ClassifierSpec spec, data::Scaler scaler, std::shared_ptr<const Model> model,
                           bool converged, std::string diagnostic)
    : spec_(std::move(spec)),
      scaler_(std::move(scaler)),
      model_(std::move(model)),
      converged_(converged),
      diagnostic_(std::move(diagnostic)) {}

namespace {

using defectbench::detail::Rng;

struct FitOutcome {
  std::shared_ptr<const Model> model;
  bool converged = true;
  std::string diagnostic;
};

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow.
double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

Vector targets01(const std::vector<int>& y) {
  Vector t(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) t(static_cast<Eigen::Index>(i)) = y[i] == 1 ? 1.0 : 0.0;
  return t;
}

FitOutcome fit_logistic(const ClassifierSpec& spec, const Matrix& z, const std::vector<int>& y) {
  const auto max_iter = static_cast<int>(spec.get("max_iter"));
  const double tol = spec.get("tol");
  const double jitter = spec.get("jitter");
  const Eigen::Index n = z.rows(), p = z.cols();
  Matrix x(n, p + 1);
  x.col(0).setOnes();
  x.rightCols(p) = z;
  const Vector t = targets01(y);

  Vector beta = Vector::Zero(p + 1);
  auto deviance = [&](const Vector& eta) {
    double dev = 0;
    for (Eigen::Index i = 0; i < n; ++i) dev += t(i) > 0.5 ? softplus(-eta(i)) : softplus(eta(i));
    return 2.0 * dev;
  };
  double dev_old = deviance(x * beta);
  for (int it = 1; it <= max_iter; ++it) {
    const Vector eta = x * beta;
    Vector w(n), work(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double pr = sigmoid(eta(i));
      w(i) = std::max(pr * (1.0 - pr), 1e-12);
      work(i) = eta(i) + (t(i) - pr) / w(i);
    }
    Matrix h = x.transpose() * w.asDiagonal() * x;
    h.diagonal().array() += jitter;
    Vector next = h.ldlt().solve(x.transpose() * (w.array() * work.array()).matrix());
    if (!next.allFinite()) {
      return {std::make_shared<detail::LinearModel>(beta.tail(p), beta(0)), false,
              "logistic_regression: non-finite update at iteration " + std::to_string(it)};
    }
    beta = next;
    const double dev = deviance(x * beta);
    if (std::abs(dev - dev_old) < tol * (std::abs(dev) + 0.1))
      return {std::make_shared<detail::LinearModel>(beta.tail(p), beta(0)), true, ""};
    dev_old = dev;
  }
  return {std::make_shared<detail::LinearModel>(beta.tail(p), beta(0)), false,
          "logistic_regression: no convergence after " + std::to_string(max_iter) + " iterations"};
}

FitOutcome fit_ridge(const ClassifierSpec& spec, const Matrix& z, const std::vector<int>& y) {
  const double lambda = spec.get("lambda");
  const Eigen::Index n = z.rows(), p = z.cols();
  Vector target(n);
  for (Eigen::Index i = 0; i < n; ++i) target(i) = y[static_cast<std::size_t>(i)];
  if (lambda == 0.0) {
    Matrix x(n, p + 1);
    x.col(0).setOnes();
    x.rightCols(p) = z;
    Vector beta = x.colPivHouseholderQr().solve(target);
    return {std::make_shared<detail::LinearModel>(beta.tail(p), beta(0)), true, ""};
  }
  const double ybar = target.mean();
  const Vector zbar = z.colwise().mean().transpose();
  const Matrix zc = z.rowwise() - zbar.transpose();
  Matrix gram = zc.transpose() * zc;
  gram.diagonal().array() += lambda;
  Vector coef = gram.ldlt().solve(zc.transpose() * (target.array() - ybar).matrix());
  return {std::make_shared<detail::LinearModel>(coef, ybar - zbar.dot(coef)), true, ""};
}

FitOutcome fit_naive_bayes(const ClassifierSpec& spec, const Matrix& z, const std::vector<int>& y) {
  const Eigen::Index p = z.cols();
  Vector sum_pos = Vector::Zero(p), sum_neg = Vector::Zero(p);
  double n_pos = 0, n_neg = 0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    if (y[static_cast<std::size_t>(i)] == 1) {
      sum_pos += z.row(i).transpose();
      n_pos += 1;
    } else {
      sum_neg += z.row(i).transpose();
      n_neg += 1;
    }
  }
  const Vector mean_pos = sum_pos / n_pos, mean_neg = sum_neg / n_neg;
  Vector var_pos = Vector::Zero(p), var_neg = Vector::Zero(p);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    if (y[static_cast<std::size_t>(i)] == 1)
      var_pos.array() += (z.row(i).transpose() - mean_pos).array().square();
    else
      var_neg.array() += (z.row(i).transpose() - mean_neg).array().square();
  }
  var_pos /= n_pos;
  var_neg /= n_neg;
  double max_var = 0;
  for (Eigen::Index c = 0; c < p; ++c) {
    const double mu = z.col(c).mean();
    max_var = std::max(max_var, (z.col(c).array() - mu).square().mean());
  }
  const double eps = std::max(spec.get("var_smoothing") * max_var, 1e-300);
  var_pos.array() += eps;
  var_neg.array() += eps;
  return {std::make_shared<detail::NaiveBayesModel>(mean_pos, var_pos, mean_neg, var_neg, std::log(n_pos / n_neg)),
          true, ""};
}

FitOutcome fit_svm(const ClassifierSpec& spec, const Matrix& z, const std::vector<int>& y, std::uint64_t seed) {
  // Dual coordinate descent for the hinge-loss SVM; the bias is an extra
  // constant feature and is regularized with the weights.
  const double c = spec.get("C");
  const auto max_iter = static_cast<int>(spec.get("max_iter"));
  const double tol = spec.get("tol");
  const Eigen::Index n = z.rows(), p = z.cols();
  Matrix x(n, p + 1);
  x.leftCols(p) = z;
  x.col(p).setOnes();
  Vector w = Vector::Zero(p + 1);
  Vector alpha = Vector::Zero(n);
  const Vector qdiag = x.rowwise().squaredNorm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int epoch = 1; epoch <= max_iter; ++epoch) {
    rng.shuffle(order);
    double pg_max = -kInf, pg_min = kInf;
    for (auto i : order) {
      const double yi = y[static_cast<std::size_t>(i)];
      const double g = yi * x.row(i).dot(w) - 1.0;
      double pg = g;
      if (alpha(i) == 0.0)
        pg = std::min(g, 0.0);
      else if (alpha(i) == c)
        pg = std::max(g, 0.0);
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::abs(pg) > 1e-12) {
        const double old = alpha(i);
        alpha(i) = std::clamp(old - g / qdiag(i), 0.0, c);
        w += (alpha(i) - old) * yi * x.row(i).transpose();
      }
    }
    if (pg_max - pg_min < tol) return {std::make_shared<detail::LinearModel>(w.head(p), w(p)), true, ""};
  }
  return {std::make_shared<detail::LinearModel>(w.head(p), w(p)), false,
          "linear_svm: no convergence after " + std::to_string(max_iter) + " iterations"};
}

FitOutcome fit_mlp(const ClassifierSpec& spec, const Matrix& z, const std::vector<int>& y, std::uint64_t seed) {
  const auto hidden = static_cast<Eigen::Index>(spec.get("hidden"));
  const double lr = spec.get("learning_rate");
  const auto epochs = static_cast<int>(spec.get("epochs"));
  const double l2 = spec.get("l2");
  const Eigen::Index n = z.rows(), p = z.cols();
  const Vector t = targets01(y);

  Rng rng(seed);
  const double a1 = 1.0 / std::sqrt(static_cast<double>(p));
  const double a2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  Matrix w1(p, hidden);
  for (Eigen::Index j = 0; j < hidden; ++j)
    for (Eigen::Index i = 0; i < p; ++i) w1(i, j) = a1 * (2.0 * rng.uniform() - 1.0);
  Vector b1 = Vector::Zero(hidden);
  Vector w2(hidden);
  for (Eigen::Index j = 0; j < hidden; ++j) w2(j) = a2 * (2.0 * rng.uniform() - 1.0);
  double b2 = 0.0;

  auto logistic = [](const Matrix& m) { return m.unaryExpr([](double v) { return sigmoid(v); }).eval(); };
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    const Matrix act = logistic((z * w1).rowwise() + b1.transpose());
    const Vector out = (act * w2).array() + b2;
    Vector delta(n);
    for (Eigen::Index i = 0; i < n; ++i) delta(i) = (sigmoid(out(i)) - t(i)) / static_cast<double>(n);
    const Vector g_w2 = act.transpose() * delta + l2 * w2;
    const double g_b2 = delta.sum();
    const Matrix d_hidden = ((delta * w2.transpose()).array() * act.array() * (1.0 - act.array())).matrix();
    const Matrix g_w1 = z.transpose() * d_hidden + l2 * w1;
    const Vector g_b1 = d_hidden.colwise().sum().transpose();
    Matrix nw1 = w1 - lr * g_w1;
    Vector nw2 = w2 - lr * g_w2;
    if (!nw1.allFinite() || !nw2.allFinite()) {
      return {std::make_shared<detail::MlpModel>(w1, b1, w2, b2), false,
              "mlp: diverged at epoch " + std::to_string(epoch)};
    }
    w1 = std::move(nw1);
    w2 = std::move(nw2);
    b1 -= lr * g_b1;
    b2 -= lr * g_b2;
  }
  return {std::make_shared<detail::MlpModel>(w1, b1, w2, b2), true, ""};
}

FitOutcome fit_adaboost(const ClassifierSpec& spec, const Matrix& z, const std::vector<int>& y) {
  const auto rounds = static_cast<int>(spec.get("rounds"));
  const Eigen::Index n = z.rows(), p = z.cols();
  Vector w = Vector::Constant(n, 1.0 / static_cast<double>(n));

  std::vector<std::vector<Eigen::Index>> sorted(static_cast<std::size_t>(p));
  for (Eigen::Index f = 0; f < p; ++f) {
    auto& idx = sorted[static_cast<std::size_t>(f)];
    idx.resize(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return z(a, f) < z(b, f); });
  }

  std::vector<detail::Stump> stages;
  for (int round = 0; round < rounds; ++round) {
    // Polarity +1 predicts +1 above the threshold; its error is the weight of
    // positives at or below plus negatives above.
    double best_err = kInf;
    detail::Stump best;
    for (Eigen::Index f = 0; f < p; ++f) {
      const auto& idx = sorted[static_cast<std::size_t>(f)];
      double neg_above = 0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (y[static_cast<std::size_t>(i)] == -1) neg_above += w(i);
      double pos_below = 0;
      for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
        const auto r = idx[k];
        if (y[static_cast<std::size_t>(r)] == 1)
          pos_below += w(r);
        else
          neg_above -= w(r);
        const double lo = z(r, f), hi = z(idx[k + 1], f);
        if (!(lo < hi)) continue;
        const double err_plus = pos_below + neg_above;
        const double err_minus = w.sum() - err_plus;
        double mid = lo + 0.5 * (hi - lo);
        if (!(mid < hi)) mid = lo;
        if (err_plus < best_err) {
          best_err = err_plus;
          best = {static_cast<int>(f), mid, 1, 0.0};
        }
        if (err_minus < best_err) {
          best_err = err_minus;
          best = {static_cast<int>(f), mid, -1, 0.0};
        }
      }
    }
    if (!(best_err < 0.5)) break;
    const double eps = std::max(best_err, 1e-10);
    best.alpha = std::log((1.0 - eps) / eps);
    stages.push_back(best);
    if (best_err <= 1e-10) break;
    const double shrink = eps / (1.0 - eps);
    for (Eigen::Index i = 0; i < n; ++i)
      if (best.predict(z.row(i)) == y[static_cast<std::size_t>(i)]) w(i) *= shrink;
    w /= w.sum();
  }
  return {std::make_shared<detail::AdaBoostModel>(std::move(stages)), true, ""};
}

FitOutcome fit_forest(const ClassifierSpec& spec, const Matrix& z, const std::vector<int>& y, std::uint64_t seed) {
  const auto n_trees = static_cast<std::size_t>(spec.get("n_trees"));
  const double frac = spec.get("max_features");
  const auto p = static_cast<std::size_t>(z.cols());
  std::size_t mtry = frac > 0 ? static_cast<std::size_t>(std::ceil(frac * static_cast<double>(p)))
                              : static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(p))));
  mtry = std::clamp<std::size_t>(mtry, 1, p);
  detail::TreeParams params{static_cast<std::size_t>(spec.get("min_leaf")), 0, mtry};
  std::vector<detail::DecisionTree> trees;
  trees.reserve(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    Rng rng(child_seed(seed, t));
    auto rows = detail::bootstrap_rows(static_cast<std::size_t>(z.rows()), rng);
    trees.push_back(detail::DecisionTree::grow(z, y, rows, params, rng));
  }
  return {std::make_shared<detail::ForestModel>(std::move(trees)), true, ""};
}

FitOutcome fit_cart(const ClassifierSpec& spec, const Matrix& z, const std::vector<int>& y, std::uint64_t seed) {
  detail::TreeParams params{static_cast<std::size_t>(spec.get("min_leaf")), static_cast<int>(spec.get("max_depth")),
                            0};
  std::vector<std::size_t> rows(static_cast<std::size_t>(z.rows()));
  std::iota(rows.begin(), rows.end(), 0);
  Rng rng(seed);
  return {std::make_shared<detail::TreeModel>(detail::DecisionTree::grow(z, y, rows, params, rng)), true, ""};
}

}  // namespace

TrainedModel fit(const ClassifierSpec& spec, const data::Dataset& train, std::uint64_t seed) {
  spec.validate();
  train.check_shape();
  if (train.rows() == 0 || train.cols() == 0) throw DataError("fit: empty training data");
  if (!train.features.allFinite()) throw DataError("fit: non-finite training features");
  const auto pos = train.positives();
  if (pos == 0 || pos == train.rows()) throw DataError("fit: training data has a single class");

  auto scaler = data::Scaler::fit(train.features);
  const Matrix z = scaler.transform(train.features);
  const auto& y = train.labels;
  FitOutcome out;
  switch (spec.algorithm) {
    case Algorithm::logistic_regression: out = fit_logistic(spec, z, y); break;
    case Algorithm::ridge_regression: out = fit_ridge(spec, z, y); break;
    case Algorithm::gaussian_naive_bayes: out = fit_naive_bayes(spec, z, y); break;
    case Algorithm::knn:
      out = {std::make_shared<detail::KnnModel>(z, y, static_cast<std::size_t>(spec.get("k"))), true, ""};
      break;
    case Algorithm::cart: out = fit_cart(spec, z, y, seed); break;
    case Algorithm::random_forest: out = fit_forest(spec, z, y, seed); break;
    case Algorithm::linear_svm: out = fit_svm(spec, z, y, seed); break;
    case Algorithm::mlp: out = fit_mlp(spec, z, y, seed); break;
    case Algorithm::adaboost: out = fit_adaboost(spec, z, y); break;
    case Algorithm::constant: out = {std::make_shared<detail::ConstantModel>(), true, ""}; break;
  }
  return TrainedModel(spec, std::move(scaler), std::move(out.model), out.converged, std::move(out.diagnostic));
}

Vector predict_scores(const TrainedModel& model, const Matrix& x) {
  if (static_cast<std::size_t>(x.cols()) != model.feature_count())
    throw ArgumentError("predict_scores: model expects " + std::to_string(model.feature_count()) +
                        " features, got " + std::to_string(x.cols()));
  Vector s = model.model().decision(model.scaler().transform(x));
  if (!s.allFinite()) throw Error(model.spec().describe() + ": non-finite scores");
  return s;
}

namespace detail {

NaiveBayesModel::NaiveBayesModel(Vector mean_pos, Vector var_pos, Vector mean_neg, Vector var_neg,
                                 double log_prior_ratio)
    : mean_pos_(std::move(mean_pos)),
      var_pos_(std::move(var_pos)),
      mean_neg_(std::move(mean_neg)),
      var_neg_(std::move(var_neg)),
      log_prior_ratio_(log_prior_ratio) {}

Vector NaiveBayesModel::decision(const Matrix& z) const {
  const double constant = log_prior_ratio_ + 0.5 * (var_neg_.array().log() - var_pos_.array().log()).sum();
  Vector out(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const auto row = z.row(i).transpose().array();
    out(i) = constant - 0.5 * ((row - mean_pos_.array()).square() / var_pos_.array()).sum() +
             0.5 * ((row - mean_neg_.array()).square() / var_neg_.array()).sum();
  }
  return out;
}

Vector KnnModel::decision(const Matrix& z) const {
  const auto n = static_cast<std::size_t>(train_.rows());
  const std::size_t k = std::min(k_, n);
  Vector out(z.rows());
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (Eigen::Index q = 0; q < z.rows(); ++q) {
    for (std::size_t j = 0; j < n; ++j)
      dist[j] = {(train_.row(static_cast<Eigen::Index>(j)) - z.row(q)).squaredNorm(), j};
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    double s = 0;
    for (std::size_t i = 0; i < k; ++i) s += labels_[dist[i].second];
    out(q) = s / static_cast<double>(k);
  }
  return out;
}

Vector TreeModel::decision(const Matrix& z) const {
  Vector out(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) out(i) = tree_.score(z.row(i));
  return out;
}

Vector ForestModel::decision(const Matrix& z) const {
  Vector out(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    std::size_t votes = 0;
    for (const auto& t : trees_) votes += t.score(z.row(i)) > 0.5 ? 1 : 0;
    out(i) = static_cast<double>(votes) / static_cast<double>(trees_.size());
  }
  return out;
}

Vector MlpModel::decision(const Matrix& z) const {
  const Matrix act = ((z * w1_).rowwise() + b1_.transpose()).unaryExpr([](double v) { return sigmoid(v); });
  return (act * w2_).array() + b2_;
}

Vector AdaBoostModel::decision(const Matrix& z) const {
  Vector out = Vector::Zero(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (const auto& s : stages_) out(i) += s.alpha * s.predict(z.row(i));
  return out;
}

}  // namespace detail
}  // namespace defectbench::learn
