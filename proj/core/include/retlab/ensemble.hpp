#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "retlab/schema.hpp"
#include "retlab/tree.hpp"

namespace retlab {

// The training setup the model was produced with, echoed into the model
// file so evaluation can rebuild the exact held-out split.
struct TrainConfig {
  int max_bin = 512;
  double learning_rate = 0.05;
  int num_leaves = 10;
  int min_data = 100;
  int num_iterations = 10000;
  bool boost_from_average = true;
  double lambda_l2 = 0.0;
  double split_ratio = 0.7;
  std::uint64_t seed = 42;
  bool stratified = false;
  std::optional<int> early_stopping_rounds;
};

void validate(const TrainConfig& cfg);

// Additive margin-space model: margin(x) = base_score + sum of tree outputs
// (shrinkage already folded into the leaf values).
struct Ensemble {
  double base_score = 0.0;
  std::vector<DecisionTree> trees;
  TrainConfig config;
  std::int64_t train_rows = 0;  // cohort size at training time

  double predict_margin(const FeatureVector& x) const;
  double predict_proba(const FeatureVector& x) const;
};

double sigmoid(double margin);

std::string ensemble_to_json(const Ensemble& m);
Ensemble ensemble_from_json(const std::string& text);

void save_ensemble(const std::string& path, const Ensemble& m);
Ensemble load_ensemble(const std::string& path);

}  // namespace retlab
