#pragma once

#include <vector>

#include "retlab/ensemble.hpp"
#include "retlab/shap.hpp"

namespace retlab {

// Largest used-feature count the oracle will enumerate (2^k subsets).
inline constexpr int kOracleFeatureLimit = 12;

// The path-dependent value function v(S): cover-weighted expectation of
// the ensemble margin when features in `subset` follow x's path and the
// rest split proportionally to child covers.
double subset_value(const Ensemble& m, const FeatureVector& x,
                    const std::vector<int>& subset);

// Shapley definition applied to subset_value by enumerating subsets of
// the features the model actually uses; unused features keep phi = 0.
ShapVector brute_force_shapley(const Ensemble& m, const FeatureVector& x);

// Pairwise Shapley interaction index for i != j by subset enumeration.
double brute_force_interaction(const Ensemble& m, const FeatureVector& x, int i, int j);

}  // namespace retlab
