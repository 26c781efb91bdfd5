#include "retlab/shap.hpp"

#include <algorithm>
#include <string>

#include "retlab/errors.hpp"

namespace retlab {
namespace {

// One segment of the unique path walked from the root: the feature that
// split it, the fraction of covers flowing through when the feature is out
// of the coalition (zero_fraction), whether x's path goes through (one_
// fraction), and the permutation weight accumulated so far.
struct PathElement {
  int feature = -1;
  double zero_fraction = 0.0;
  double one_fraction = 0.0;
  double pweight = 0.0;
};

void extend_path(PathElement* path, int depth, double zero_fraction,
                 double one_fraction, int feature) {
  path[depth] = {feature, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0};
  for (int i = depth - 1; i >= 0; --i) {
    path[i + 1].pweight +=
        one_fraction * path[i].pweight * (i + 1) / static_cast<double>(depth + 1);
    path[i].pweight =
        zero_fraction * path[i].pweight * (depth - i) / static_cast<double>(depth + 1);
  }
}

void unwind_path(PathElement* path, int depth, int index) {
  const double one_fraction = path[index].one_fraction;
  const double zero_fraction = path[index].zero_fraction;
  double next_one_portion = path[depth].pweight;

  for (int i = depth - 1; i >= 0; --i) {
    if (one_fraction != 0.0) {
      const double tmp = path[i].pweight;
      path[i].pweight =
          next_one_portion * (depth + 1) / static_cast<double>((i + 1) * one_fraction);
      next_one_portion = tmp - path[i].pweight * zero_fraction * (depth - i) /
                                   static_cast<double>(depth + 1);
    } else {
      path[i].pweight =
          path[i].pweight * (depth + 1) / (zero_fraction * static_cast<double>(depth - i));
    }
  }
  for (int i = index; i < depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
}

// Total permutation weight the path would have if element `index` were
// unwound, without mutating the path.
double unwound_path_sum(const PathElement* path, int depth, int index) {
  const double one_fraction = path[index].one_fraction;
  const double zero_fraction = path[index].zero_fraction;
  double next_one_portion = path[depth].pweight;
  double total = 0.0;
  for (int i = depth - 1; i >= 0; --i) {
    if (one_fraction != 0.0) {
      const double tmp =
          next_one_portion * (depth + 1) / static_cast<double>((i + 1) * one_fraction);
      total += tmp;
      next_one_portion = path[i].pweight - tmp * zero_fraction * (depth - i) /
                                               static_cast<double>(depth + 1);
    } else if (zero_fraction != 0.0) {
      total += path[i].pweight / zero_fraction /
               ((depth - i) / static_cast<double>(depth + 1));
    }
  }
  return total;
}

// phi has kNumFeatures + 1 slots; the last accumulates the base value.
// condition: 0 unconditioned, +1 treats condition_feature as always
// present, -1 as always absent (used for interaction values).
void tree_shap_recurse(const DecisionTree& tree, const FeatureVector& x, double* phi,
                       int node_index, int depth, PathElement* parent_path,
                       double parent_zero_fraction, double parent_one_fraction,
                       int parent_feature, int condition, int condition_feature,
                       double condition_fraction) {
  if (condition_fraction == 0.0) return;

  PathElement* path = parent_path + depth + 1;
  std::copy(parent_path, parent_path + depth + 1, path);
  if (condition == 0 || condition_feature != parent_feature) {
    extend_path(path, depth, parent_zero_fraction, parent_one_fraction, parent_feature);
  }

  const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
  if (node.is_leaf()) {
    for (int i = 1; i <= depth; ++i) {
      const double w = unwound_path_sum(path, depth, i);
      const PathElement& el = path[i];
      phi[el.feature] +=
          w * (el.one_fraction - el.zero_fraction) * node.value * condition_fraction;
    }
    return;
  }

  if (node.cover <= 0) {
    throw DataError("model integrity: node " + std::to_string(node_index) +
                    " has zero cover");
  }
  const bool goes_left =
      x.values[static_cast<std::size_t>(node.feature)] <= node.threshold;
  const int hot = goes_left ? node.left : node.right;
  const int cold = goes_left ? node.right : node.left;
  const double cover = static_cast<double>(node.cover);
  const double hot_zero_fraction =
      static_cast<double>(tree.nodes[static_cast<std::size_t>(hot)].cover) / cover;
  const double cold_zero_fraction =
      static_cast<double>(tree.nodes[static_cast<std::size_t>(cold)].cover) / cover;
  double incoming_zero_fraction = 1.0;
  double incoming_one_fraction = 1.0;

  // A feature met twice on the path is unwound and re-extended so its two
  // fractions multiply instead of weighting twice.
  int path_index = 0;
  while (path_index <= depth && path[path_index].feature != node.feature) ++path_index;
  if (path_index != depth + 1) {
    incoming_zero_fraction = path[path_index].zero_fraction;
    incoming_one_fraction = path[path_index].one_fraction;
    unwind_path(path, depth, path_index);
    depth -= 1;
  }

  double hot_condition_fraction = condition_fraction;
  double cold_condition_fraction = condition_fraction;
  if (condition > 0 && node.feature == condition_feature) {
    cold_condition_fraction = 0.0;
    depth -= 1;
  } else if (condition < 0 && node.feature == condition_feature) {
    hot_condition_fraction *= hot_zero_fraction;
    cold_condition_fraction *= cold_zero_fraction;
    depth -= 1;
  }

  tree_shap_recurse(tree, x, phi, hot, depth + 1, path,
                    hot_zero_fraction * incoming_zero_fraction, incoming_one_fraction,
                    node.feature, condition, condition_feature, hot_condition_fraction);
  tree_shap_recurse(tree, x, phi, cold, depth + 1, path,
                    cold_zero_fraction * incoming_zero_fraction, 0.0, node.feature,
                    condition, condition_feature, cold_condition_fraction);
}

void tree_contributions(const DecisionTree& tree, const FeatureVector& x, double* phi,
                        int condition, int condition_feature) {
  internal_check(!tree.nodes.empty(), "tree_shap on an empty tree");
  if (condition == 0) phi[kNumFeatures] += tree.expected_value();
  const int max_elements = tree.max_depth() + 2;
  std::vector<PathElement> path(
      static_cast<std::size_t>(max_elements) * (max_elements + 1) / 2);
  tree_shap_recurse(tree, x, phi, 0, 0, path.data(), 1.0, 1.0, -1, condition,
                    condition_feature, 1.0);
}

void model_contributions(const Ensemble& m, const FeatureVector& x, double* phi,
                         int condition, int condition_feature) {
  for (const DecisionTree& tree : m.trees) {
    tree_contributions(tree, x, phi, condition, condition_feature);
  }
  if (condition == 0) phi[kNumFeatures] += m.base_score;
}

}  // namespace

std::vector<int> used_features(const Ensemble& m) {
  std::array<bool, kNumFeatures> seen{};
  for (const DecisionTree& tree : m.trees) {
    for (const TreeNode& node : tree.nodes) {
      if (!node.is_leaf()) seen[static_cast<std::size_t>(node.feature)] = true;
    }
  }
  std::vector<int> out;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    if (seen[f]) out.push_back(static_cast<int>(f));
  }
  return out;
}

ShapVector tree_shap(const Ensemble& m, const FeatureVector& x) {
  std::array<double, kNumFeatures + 1> buf{};
  model_contributions(m, x, buf.data(), 0, -1);
  ShapVector out;
  std::copy(buf.begin(), buf.begin() + kNumFeatures, out.phi.begin());
  out.base_value = buf[kNumFeatures];
  return out;
}

std::vector<ShapVector> tree_shap_batch(const Ensemble& m, const Cohort& xs) {
  std::vector<ShapVector> out;
  out.reserve(xs.size());
  for (const FeatureVector& x : xs) out.push_back(tree_shap(m, x));
  return out;
}

InteractionMatrix interaction_values(const Ensemble& m, const FeatureVector& x) {
  std::array<double, kNumFeatures + 1> diag{};
  model_contributions(m, x, diag.data(), 0, -1);

  std::array<bool, kNumFeatures> is_used{};
  for (int f : used_features(m)) is_used[static_cast<std::size_t>(f)] = true;

  InteractionMatrix out;
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (!is_used[i]) {
      out.values[i][i] = diag[i];
      continue;
    }
    std::array<double, kNumFeatures + 1> on{};
    std::array<double, kNumFeatures + 1> off{};
    model_contributions(m, x, on.data(), +1, static_cast<int>(i));
    model_contributions(m, x, off.data(), -1, static_cast<int>(i));
    double off_diagonal_sum = 0.0;
    for (std::size_t k = 0; k < kNumFeatures; ++k) {
      if (k == i) continue;
      out.values[i][k] = 0.5 * (on[k] - off[k]);
      off_diagonal_sum += out.values[i][k];
    }
    out.values[i][i] = diag[i] - off_diagonal_sum;
  }
  return out;
}

std::vector<InteractionMatrix> interaction_values_batch(const Ensemble& m,
                                                        const Cohort& xs) {
  std::vector<InteractionMatrix> out;
  out.reserve(xs.size());
  for (const FeatureVector& x : xs) out.push_back(interaction_values(m, x));
  return out;
}

}  // namespace retlab
