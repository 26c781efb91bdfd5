#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "retlab/binning.hpp"
#include "retlab/ensemble.hpp"
#include "retlab/schema.hpp"

namespace retlab {

// Seeded uniform shuffle, then a prefix of round(ratio * n) training rows.
// The stratified variant shuffles and splits each class separately.
std::pair<Cohort, Cohort> split_train_test(const Cohort& cohort, double ratio,
                                           std::uint64_t seed, bool stratified = false);

// log(p / (1-p)) with p = mean(label). Throws on single-class labels.
double init_base_score(const std::vector<std::uint8_t>& labels);

struct GradientPair {
  std::vector<double> g;
  std::vector<double> h;
};

// First and second derivatives of binary log loss in margin space:
// g = sigmoid(margin) - y, h = sigmoid(margin) * (1 - sigmoid(margin)).
GradientPair logistic_gradients(const std::vector<std::uint8_t>& labels,
                                const std::vector<double>& margins);

// Second-order split gain; -inf marks an unusable candidate. The optimal
// value of a leaf with aggregates (G, H) is -G / (H + lambda).
double split_gain(double gl, double hl, double gr, double hr, double lambda_l2);

// Best-first growth: always materializes the single highest-gain split,
// stops at num_leaves, when no candidate gain is positive, or when min_data
// blocks every candidate. Leaf values are unshrunk Newton steps.
DecisionTree grow_tree(const BinnedDataset& data, const std::vector<double>& g,
                       const std::vector<double>& h, const TrainConfig& cfg);

struct TrainHistory {
  std::vector<double> train_logloss;  // one entry per completed iteration
  std::vector<double> valid_logloss;
};

struct TrainResult {
  Ensemble model;
  TrainHistory history;
};

// Boosting loop over pre-binned data. valid shares the train boundaries and
// is only scored, never fit. Deterministic for a fixed (data, config).
TrainResult train(const BinnedDataset& train_data, const BinnedDataset& valid_data,
                  const TrainConfig& cfg);

// Convenience wrapper: split, bin, train.
struct PipelineResult {
  Ensemble model;
  TrainHistory history;
  Cohort train_split;
  Cohort test_split;
};
PipelineResult train_on_cohort(const Cohort& cohort, const TrainConfig& cfg);

}  // namespace retlab
