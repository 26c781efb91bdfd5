#include "retlab/tree.hpp"

#include <string>

#include "retlab/errors.hpp"

namespace retlab {

std::size_t DecisionTree::leaf_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes) {
    if (node.is_leaf()) ++n;
  }
  return n;
}

namespace {

int depth_below(const DecisionTree& t, int idx) {
  const TreeNode& node = t.nodes[static_cast<std::size_t>(idx)];
  if (node.is_leaf()) return 0;
  return 1 + std::max(depth_below(t, node.left), depth_below(t, node.right));
}

double mean_below(const DecisionTree& t, int idx) {
  const TreeNode& node = t.nodes[static_cast<std::size_t>(idx)];
  if (node.is_leaf()) return node.value;
  const auto& l = t.nodes[static_cast<std::size_t>(node.left)];
  const auto& r = t.nodes[static_cast<std::size_t>(node.right)];
  const double cl = static_cast<double>(l.cover);
  const double cr = static_cast<double>(r.cover);
  return (mean_below(t, node.left) * cl + mean_below(t, node.right) * cr) / (cl + cr);
}

}  // namespace

int DecisionTree::max_depth() const { return nodes.empty() ? 0 : depth_below(*this, 0); }

int DecisionTree::route(const FeatureVector& x) const {
  internal_check(!nodes.empty(), "route on an empty tree");
  int idx = 0;
  while (!nodes[static_cast<std::size_t>(idx)].is_leaf()) {
    const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
    idx = x.values[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                            : node.right;
  }
  return idx;
}

double DecisionTree::predict(const FeatureVector& x) const {
  return nodes[static_cast<std::size_t>(route(x))].value;
}

double DecisionTree::expected_value() const {
  internal_check(!nodes.empty(), "expected_value on an empty tree");
  return mean_below(*this, 0);
}

void DecisionTree::scale(double factor) {
  for (auto& node : nodes) {
    if (node.is_leaf()) node.value *= factor;
  }
}

void DecisionTree::validate() const {
  if (nodes.empty()) throw DataError("tree has no nodes");
  const int n = static_cast<int>(nodes.size());
  for (int i = 0; i < n; ++i) {
    const TreeNode& node = nodes[static_cast<std::size_t>(i)];
    if (node.cover <= 0) {
      throw DataError("tree node " + std::to_string(i) + " has non-positive cover");
    }
    if (node.is_leaf()) continue;
    if (node.feature >= static_cast<int>(kNumFeatures)) {
      throw DataError("tree node " + std::to_string(i) + " splits an unknown feature");
    }
    if (node.left <= i || node.left >= n || node.right <= i || node.right >= n) {
      throw DataError("tree node " + std::to_string(i) + " has out-of-range children");
    }
    const auto& l = nodes[static_cast<std::size_t>(node.left)];
    const auto& r = nodes[static_cast<std::size_t>(node.right)];
    if (l.cover + r.cover != node.cover) {
      throw DataError("tree node " + std::to_string(i) +
                      " cover does not equal the sum of its children");
    }
  }
}

}  // namespace retlab
