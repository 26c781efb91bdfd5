#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace retlab {

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const { return tp + fp + fn + tn; }
  bool operator==(const Confusion&) const = default;
};

struct EvalReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double roc_auc = 0.0;
  double log_loss = 0.0;
  Confusion confusion;
  double threshold = 0.5;
};

// Predicts positive iff proba >= threshold.
Confusion confusion_counts(const std::vector<std::uint8_t>& labels,
                           const std::vector<double>& probas, double threshold);

double accuracy(const Confusion& c);
// 0 when tp+fp = 0.
double precision(const Confusion& c);
// 0 when tp+fn = 0.
double recall(const Confusion& c);
// 0 when precision+recall = 0.
double f1_score(const Confusion& c);

// Mann-Whitney statistic with exact tie handling: P(s+ > s-) + P(tie)/2.
// Throws DataError when a class is missing.
double roc_auc(const std::vector<std::uint8_t>& labels, const std::vector<double>& scores);

// Mean binary cross-entropy, probabilities clamped to [1e-15, 1-1e-15].
double log_loss(const std::vector<std::uint8_t>& labels, const std::vector<double>& probas);

EvalReport evaluate(const std::vector<std::uint8_t>& labels,
                    const std::vector<double>& probas, double threshold = 0.5);

std::string report_to_json(const EvalReport& r);

}  // namespace retlab
