#include "tree.hpp"

#include <algorithm>
#include <numeric>

namespace defectbench::learn::detail {

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

double gini(double pos, double total) {
  if (total <= 0) return 0.0;
  const double p = pos / total;
  return 2.0 * p * (1.0 - p);
}

Split best_split(const data::Matrix& x, const std::vector<int>& y, std::vector<std::size_t>& rows,
                 const std::vector<int>& features, std::size_t min_leaf, double parent_impurity) {
  Split best;
  best.impurity = parent_impurity - 1e-12;
  const auto m = rows.size();
  double total_pos = 0;
  for (auto r : rows) total_pos += y[r] == 1 ? 1.0 : 0.0;

  for (int f : features) {
    std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
    double left_pos = 0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      left_pos += y[rows[i]] == 1 ? 1.0 : 0.0;
      const auto nl = i + 1;
      const auto nr = m - nl;
      if (nl < min_leaf) continue;
      if (nr < min_leaf) break;
      const double lo = x(rows[i], f);
      const double hi = x(rows[i + 1], f);
      if (!(lo < hi)) continue;
      const double imp = (static_cast<double>(nl) * gini(left_pos, static_cast<double>(nl)) +
                          static_cast<double>(nr) * gini(total_pos - left_pos, static_cast<double>(nr))) /
                         static_cast<double>(m);
      if (imp < best.impurity) {
        double mid = lo + 0.5 * (hi - lo);
        if (!(mid < hi)) mid = lo;
        best = {f, mid, imp};
      }
    }
  }
  return best;
}

}  // namespace

std::vector<std::size_t> bootstrap_rows(std::size_t n, defectbench::detail::Rng& rng) {
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = rng.index(n);
  return rows;
}

DecisionTree DecisionTree::grow(const data::Matrix& x, const std::vector<int>& y, const std::vector<std::size_t>& rows,
                                const TreeParams& params, defectbench::detail::Rng& rng) {
  DecisionTree tree;
  const auto p = static_cast<std::size_t>(x.cols());
  const std::size_t min_leaf = std::max<std::size_t>(1, params.min_leaf);
  const bool subsample = params.max_features > 0 && params.max_features < p;

  struct Task {
    int node;
    std::vector<std::size_t> rows;
    int depth;
  };
  std::vector<Task> stack;
  tree.nodes_.emplace_back();
  stack.push_back({0, rows, 0});
  std::vector<int> all_features(p);
  std::iota(all_features.begin(), all_features.end(), 0);
  std::vector<int> pool(p);

  while (!stack.empty()) {
    Task task = std::move(stack.back());
    stack.pop_back();
    const auto m = task.rows.size();
    double pos = 0;
    for (auto r : task.rows) pos += y[r] == 1 ? 1.0 : 0.0;
    {
      Node& node = tree.nodes_[static_cast<std::size_t>(task.node)];
      node.count = m;
      node.positive_fraction = m ? pos / static_cast<double>(m) : 0.0;
    }
    const double impurity = gini(pos, static_cast<double>(m));
    const bool depth_exhausted = params.max_depth > 0 && task.depth >= params.max_depth;
    if (impurity == 0.0 || m < 2 * min_leaf || depth_exhausted) continue;

    std::vector<int> features;
    if (subsample) {
      std::iota(pool.begin(), pool.end(), 0);
      for (std::size_t i = 0; i < params.max_features; ++i) std::swap(pool[i], pool[i + rng.index(p - i)]);
      features.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(params.max_features));
      std::sort(features.begin(), features.end());
    } else {
      features = all_features;
    }
    const Split split = best_split(x, y, task.rows, features, min_leaf, impurity);
    if (split.feature < 0) continue;

    std::vector<std::size_t> left, right;
    for (auto r : task.rows) (x(r, split.feature) <= split.threshold ? left : right).push_back(r);
    const int li = static_cast<int>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    tree.nodes_.emplace_back();
    Node& node = tree.nodes_[static_cast<std::size_t>(task.node)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = li;
    node.right = li + 1;
    // Right child is pushed first so the left subtree is expanded first.
    stack.push_back({li + 1, std::move(right), task.depth + 1});
    stack.push_back({li, std::move(left), task.depth + 1});
  }
  return tree;
}

double DecisionTree::score(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  std::size_t i = 0;
  while (nodes_[i].feature >= 0) {
    const Node& n = nodes_[i];
    i = static_cast<std::size_t>(row(n.feature) <= n.threshold ? n.left : n.right);
  }
  return nodes_[i].positive_fraction;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

int DecisionTree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].feature < 0) continue;
    d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
    d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    best = std::max(best, d[i] + 1);
  }
  return best;
}

}  // namespace defectbench::learn::detail
