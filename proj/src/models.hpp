#pragma once

#include "defectbench/learners.hpp"
#include "tree.hpp"

#include <vector>

namespace defectbench::learn {

/// Fitted state of one algorithm. Inputs to decision() are already
/// standardized with the owning TrainedModel's scaler.
class Model {
 public:
  virtual ~Model() = default;
  virtual data::Vector decision(const data::Matrix& z) const = 0;
};

namespace detail {

class ConstantModel final : public Model {
 public:
  data::Vector decision(const data::Matrix& z) const override { return data::Vector::Zero(z.rows()); }
};

/// Scores are intercept + z . coef; shared by logistic, ridge and linear SVM.
class LinearModel final : public Model {
 public:
  LinearModel(data::Vector coef, double intercept) : coef_(std::move(coef)), intercept_(intercept) {}
  data::Vector decision(const data::Matrix& z) const override {
    return (z * coef_).array() + intercept_;
  }
  const data::Vector& coef() const { return coef_; }
  double intercept() const { return intercept_; }

 private:
  data::Vector coef_;
  double intercept_;
};

class NaiveBayesModel final : public Model {
 public:
  NaiveBayesModel(data::Vector mean_pos, data::Vector var_pos, data::Vector mean_neg, data::Vector var_neg,
                  double log_prior_ratio);
  data::Vector decision(const data::Matrix& z) const override;

 private:
  data::Vector mean_pos_, var_pos_, mean_neg_, var_neg_;
  double log_prior_ratio_;
};

class KnnModel final : public Model {
 public:
  KnnModel(data::Matrix train, std::vector<int> labels, std::size_t k)
      : train_(std::move(train)), labels_(std::move(labels)), k_(k) {}
  data::Vector decision(const data::Matrix& z) const override;

 private:
  data::Matrix train_;
  std::vector<int> labels_;
  std::size_t k_;
};

class TreeModel final : public Model {
 public:
  explicit TreeModel(DecisionTree tree) : tree_(std::move(tree)) {}
  data::Vector decision(const data::Matrix& z) const override;
  const DecisionTree& tree() const { return tree_; }

 private:
  DecisionTree tree_;
};

/// Score = fraction of trees whose leaf majority is +1.
class ForestModel final : public Model {
 public:
  explicit ForestModel(std::vector<DecisionTree> trees) : trees_(std::move(trees)) {}
  data::Vector decision(const data::Matrix& z) const override;
  const std::vector<DecisionTree>& trees() const { return trees_; }

 private:
  std::vector<DecisionTree> trees_;
};

/// One hidden layer of logistic units; the score is the output logit.
class MlpModel final : public Model {
 public:
  MlpModel(data::Matrix w1, data::Vector b1, data::Vector w2, double b2)
      : w1_(std::move(w1)), b1_(std::move(b1)), w2_(std::move(w2)), b2_(b2) {}
  data::Vector decision(const data::Matrix& z) const override;

 private:
  data::Matrix w1_;  // p x hidden
  data::Vector b1_;
  data::Vector w2_;
  double b2_;
};

struct Stump {
  int feature = 0;
  double threshold = 0.0;
  int polarity = 1;  // h(x) = polarity if x[feature] > threshold else -polarity
  double alpha = 0.0;

  int predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    return row(feature) > threshold ? polarity : -polarity;
  }
};

/// AdaBoost.M1 over decision stumps; the score is sum(alpha_m * h_m(x)).
class AdaBoostModel final : public Model {
 public:
  explicit AdaBoostModel(std::vector<Stump> stages) : stages_(std::move(stages)) {}
  data::Vector decision(const data::Matrix& z) const override;
  const std::vector<Stump>& stages() const { return stages_; }

 private:
  std::vector<Stump> stages_;
};

}  // namespace detail
}  // namespace defectbench::learn
