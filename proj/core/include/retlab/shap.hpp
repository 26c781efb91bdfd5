#pragma once

#include <array>
#include <vector>

#include "retlab/ensemble.hpp"
#include "retlab/schema.hpp"

namespace retlab {

// Per-sample attribution in margin space. Local accuracy:
// base_value + sum(phi) equals predict_margin(x) within 1e-6.
struct ShapVector {
  std::array<double, kNumFeatures> phi{};
  double base_value = 0.0;
};

// Pairwise attribution, margin space. Symmetric; row i sums to phi[i].
struct InteractionMatrix {
  std::array<std::array<double, kNumFeatures>, kNumFeatures> values{};
};

// Features referenced by at least one split, ascending schema order.
std::vector<int> used_features(const Ensemble& m);

// Exact Shapley values under the path-dependent value function: features
// in the coalition follow x's path, the rest split proportionally to
// child covers.
ShapVector tree_shap(const Ensemble& m, const FeatureVector& x);

std::vector<ShapVector> tree_shap_batch(const Ensemble& m, const Cohort& xs);

InteractionMatrix interaction_values(const Ensemble& m, const FeatureVector& x);

std::vector<InteractionMatrix> interaction_values_batch(const Ensemble& m, const Cohort& xs);

}  // namespace retlab
