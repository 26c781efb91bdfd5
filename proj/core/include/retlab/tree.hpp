#pragma once

#include <cstdint>
#include <vector>

#include "retlab/schema.hpp"

namespace retlab {

// Flat binary tree. Node 0 is the root; leaves carry the margin
// contribution, internal nodes a raw-space threshold (left iff
// value <= threshold). cover counts the training rows through the node.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaves only
  std::int64_t cover = 0;
  int split_bin = -1;  // transient, filled during growth, not serialized

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  bool empty() const { return nodes.empty(); }
  std::size_t leaf_count() const;
  int max_depth() const;

  // Index of the leaf x reaches.
  int route(const FeatureVector& x) const;
  double predict(const FeatureVector& x) const;

  // Cover-weighted mean of leaf values, the tree's output expectation
  // under the training distribution.
  double expected_value() const;

  // Multiplies every leaf value; used for learning-rate shrinkage.
  void scale(double factor);

  // Throws DataError when the structure or the cover accounting is broken.
  void validate() const;
};

}  // namespace retlab
