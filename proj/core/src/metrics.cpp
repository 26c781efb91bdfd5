#include "retlab/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "nlohmann/json.hpp"
#include "retlab/errors.hpp"

namespace retlab {

Confusion confusion_counts(const std::vector<std::uint8_t>& labels,
                           const std::vector<double>& probas, double threshold) {
  if (labels.size() != probas.size()) {
    throw DataError("labels and probabilities differ in length");
  }
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool pred = probas[i] >= threshold;
    if (labels[i]) {
      (pred ? c.tp : c.fn)++;
    } else {
      (pred ? c.fp : c.tn)++;
    }
  }
  return c;
}

double accuracy(const Confusion& c) {
  const auto n = c.total();
  internal_check(n > 0, "accuracy over an empty sample");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(n);
}

double precision(const Confusion& c) {
  const auto denom = c.tp + c.fp;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double recall(const Confusion& c) {
  const auto denom = c.tp + c.fn;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double f1_score(const Confusion& c) {
  const double p = precision(c);
  const double r = recall(c);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double roc_auc(const std::vector<std::uint8_t>& labels, const std::vector<double>& scores) {
  if (labels.size() != scores.size()) throw DataError("labels and scores differ in length");

  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Tied scores share their average rank.
  double rank_sum_pos = 0.0;
  std::size_t n_pos = 0, n_neg = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        rank_sum_pos += avg_rank;
        ++n_pos;
      } else {
        ++n_neg;
      }
    }
    i = j;
  }
  if (n_pos == 0 || n_neg == 0) {
    throw DataError("roc_auc needs both classes present");
  }
  const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) *
                                      static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double log_loss(const std::vector<std::uint8_t>& labels, const std::vector<double>& probas) {
  if (labels.size() != probas.size()) {
    throw DataError("labels and probabilities differ in length");
  }
  internal_check(!labels.empty(), "log_loss over an empty sample");
  constexpr double kEps = 1e-15;
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = std::clamp(probas[i], kEps, 1.0 - kEps);
    sum -= labels[i] ? std::log(p) : std::log(1.0 - p);
  }
  return sum / static_cast<double>(labels.size());
}

EvalReport evaluate(const std::vector<std::uint8_t>& labels,
                    const std::vector<double>& probas, double threshold) {
  EvalReport r;
  r.threshold = threshold;
  r.confusion = confusion_counts(labels, probas, threshold);
  r.accuracy = accuracy(r.confusion);
  r.precision = precision(r.confusion);
  r.recall = recall(r.confusion);
  r.f1 = f1_score(r.confusion);
  r.roc_auc = roc_auc(labels, probas);
  r.log_loss = log_loss(labels, probas);
  return r;
}

std::string report_to_json(const EvalReport& r) {
  nlohmann::ordered_json doc;
  doc["accuracy"] = r.accuracy;
  doc["precision"] = r.precision;
  doc["recall"] = r.recall;
  doc["f1"] = r.f1;
  doc["roc_auc"] = r.roc_auc;
  doc["log_loss"] = r.log_loss;
  doc["threshold"] = r.threshold;
  doc["confusion"] = {{"tp", r.confusion.tp},
                      {"fp", r.confusion.fp},
                      {"fn", r.confusion.fn},
                      {"tn", r.confusion.tn}};
  return doc.dump(2) + "\n";
}

}  // namespace retlab
