#pragma once

#include "defectbench/dataset.hpp"
#include "rng.hpp"

#include <vector>

namespace defectbench::learn::detail {

struct TreeParams {
  std::size_t min_leaf = 1;
  int max_depth = 0;             // 0 = unlimited
  std::size_t max_features = 0;  // features tried per node; 0 = all
};

/// Binary classification tree grown by Gini impurity. Leaves store the
/// fraction of +1 rows that reached them.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;     // rows with x[feature] <= threshold
    int right = -1;
    double positive_fraction = 0.0;
    std::size_t count = 0;
  };

  /// Grows on `rows` of `x` (duplicates allowed, as in a bootstrap sample).
  /// `rng` is only consulted when max_features < x.cols().
  static DecisionTree grow(const data::Matrix& x, const std::vector<int>& y, const std::vector<std::size_t>& rows,
                           const TreeParams& params, defectbench::detail::Rng& rng);

  double score(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t leaf_count() const;
  int depth() const;

 private:
  std::vector<Node> nodes_;
};

/// n draws with replacement from {0..n-1}.
std::vector<std::size_t> bootstrap_rows(std::size_t n, defectbench::detail::Rng& rng);

}  // namespace defectbench::learn::detail
