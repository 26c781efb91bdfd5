#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "nlohmann/json.hpp"
#include "retlab/errors.hpp"
#include "retlab/metrics.hpp"

using namespace retlab;

namespace {

// O(n^2) reference: over all positive/negative pairs, wins + half-ties.
double pairwise_auc(const std::vector<std::uint8_t>& labels,
                    const std::vector<double>& scores) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("confusion counts split on proba >= threshold") {
  SUBCASE("perfect separation") {
    const Confusion c = confusion_counts({1, 1, 0, 0}, {0.9, 0.8, 0.2, 0.1}, 0.5);
    CHECK(c == Confusion{2, 0, 0, 2});
  }
  SUBCASE("0.5 at threshold 0.5 counts as positive") {
    const Confusion c = confusion_counts({1, 0}, {0.5, 0.5}, 0.5);
    CHECK(c == Confusion{1, 1, 0, 0});
  }
  SUBCASE("mixed outcome by hand") {
    // probas 0.9 x4 vs 0.1 x6; labels give tp=2 fp=1 fn=2 tn=5... recount:
    // positives scored high: 2, positives scored low: 2, negatives scored
    // high: 1, negatives scored low: 5.
    const std::vector<std::uint8_t> labels{1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
    const std::vector<double> probas{0.9, 0.9, 0.1, 0.1, 0.9, 0.1, 0.1, 0.1, 0.1, 0.1};
    const Confusion c = confusion_counts(labels, probas, 0.5);
    CHECK(c == Confusion{2, 1, 2, 5});
    CHECK(c.total() == 10);
  }
  SUBCASE("length mismatch is a data error") {
    CHECK_THROWS_AS(confusion_counts({1, 0}, {0.5}, 0.5), DataError);
  }
}

TEST_CASE("ratio metrics and their degenerate conventions") {
  const Confusion c{2, 1, 1, 6};
  CHECK(accuracy(c) == doctest::Approx(0.8));
  CHECK(precision(c) == doctest::Approx(2.0 / 3.0));
  CHECK(recall(c) == doctest::Approx(2.0 / 3.0));
  CHECK(f1_score(c) == doctest::Approx(2.0 / 3.0));

  const Confusion perfect{4, 0, 0, 6};
  CHECK(accuracy(perfect) == doctest::Approx(1.0));
  CHECK(precision(perfect) == doctest::Approx(1.0));
  CHECK(recall(perfect) == doctest::Approx(1.0));
  CHECK(f1_score(perfect) == doctest::Approx(1.0));

  const Confusion no_positive_calls{0, 0, 3, 7};
  CHECK(precision(no_positive_calls) == 0.0);
  CHECK(recall(no_positive_calls) == 0.0);
  CHECK(f1_score(no_positive_calls) == 0.0);
}

TEST_CASE("roc_auc handles order, ties and symmetry") {
  SUBCASE("separable scores give 1") {
    CHECK(roc_auc({0, 0, 1, 1}, {0.1, 0.2, 0.8, 0.9}) == doctest::Approx(1.0));
  }
  SUBCASE("all-equal scores give exactly one half") {
    CHECK(roc_auc({0, 1, 0, 1, 1}, {0.3, 0.3, 0.3, 0.3, 0.3}) == 0.5);
  }
  SUBCASE("textbook four-point case") {
    CHECK(roc_auc({0, 0, 1, 1}, {0.1, 0.4, 0.35, 0.8}) == doctest::Approx(0.75));
  }
  SUBCASE("rank statistic is invariant to monotone transforms") {
    const std::vector<std::uint8_t> labels{1, 0, 1, 0, 1, 0, 0, 1, 0, 0};
    const std::vector<double> raw{2.5, -1.0, 0.75, 0.5, 3.0, -2.0, 0.1, 0.2, 1.5, -0.3};
    std::vector<double> squashed(raw.size());
    std::transform(raw.begin(), raw.end(), squashed.begin(),
                   [](double m) { return 1.0 / (1.0 + std::exp(-m)); });
    CHECK(roc_auc(labels, raw) == doctest::Approx(roc_auc(labels, squashed)));
  }
  SUBCASE("matches the pairwise definition on tie-heavy random data") {
    std::mt19937 eng(77);
    std::uniform_int_distribution<int> n_dist(5, 200);
    std::uniform_int_distribution<int> score_dist(0, 9);  // forces ties
    std::bernoulli_distribution label_dist(0.4);
    for (int rep = 0; rep < 100; ++rep) {
      const int n = n_dist(eng);
      std::vector<std::uint8_t> labels(n);
      std::vector<double> scores(n);
      bool has0 = false, has1 = false;
      for (int i = 0; i < n; ++i) {
        labels[i] = label_dist(eng);
        (labels[i] ? has1 : has0) = true;
        scores[i] = score_dist(eng) / 10.0;
      }
      if (!has0 || !has1) continue;
      CHECK(roc_auc(labels, scores) ==
            doctest::Approx(pairwise_auc(labels, scores)).epsilon(1e-12));
    }
  }
  SUBCASE("a single class is a data error") {
    CHECK_THROWS_AS(roc_auc({1, 1, 1}, {0.1, 0.2, 0.3}), DataError);
    CHECK_THROWS_AS(roc_auc({0, 0}, {0.1, 0.2}), DataError);
  }
}

TEST_CASE("log loss values and clamping") {
  CHECK(log_loss({1, 0}, {1.0, 0.0}) < 1e-12);
  CHECK(log_loss({1, 0, 1, 0}, {0.5, 0.5, 0.5, 0.5}) ==
        doctest::Approx(std::log(2.0)));
  // 0.5 * (-ln 0.75 - ln 0.25)
  CHECK(log_loss({1, 0}, {0.75, 0.75}) == doctest::Approx(0.836988).epsilon(1e-6));
  // -(ln 0.9 + ln 0.2) / 2
  CHECK(log_loss({1, 0}, {0.9, 0.8}) == doctest::Approx(0.857399).epsilon(1e-5));
  CHECK(log_loss({1, 0, 1}, {0.8, 0.3, 0.6}) ==
        doctest::Approx(-(std::log(0.8) + std::log(0.7) + std::log(0.6)) / 3.0));

  SUBCASE("confident mistakes are clamped, not infinite") {
    const double worst = log_loss({1}, {0.0});
    CHECK(std::isfinite(worst));
    CHECK(worst == doctest::Approx(-std::log(1e-15)));
  }
  SUBCASE("a constant predictor is minimized at the label mean") {
    const std::vector<std::uint8_t> labels{1, 1, 0, 1, 0, 0, 0, 1, 1, 1};  // mean 0.6
    const double at_mean = log_loss(labels, std::vector<double>(10, 0.6));
    for (double p = 0.05; p < 1.0; p += 0.05) {
      if (std::abs(p - 0.6) < 1e-9) continue;
      CHECK(log_loss(labels, std::vector<double>(10, p)) > at_mean);
    }
  }
}

TEST_CASE("evaluate composes every headline number") {
  const std::vector<std::uint8_t> labels{1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
  const std::vector<double> probas{0.9, 0.8, 0.4, 0.3, 0.7, 0.2, 0.2, 0.1, 0.1, 0.1};
  const EvalReport r = evaluate(labels, probas, 0.5);

  CHECK(r.confusion == Confusion{2, 1, 2, 5});
  CHECK(r.accuracy == doctest::Approx(0.7));
  CHECK(r.accuracy == doctest::Approx(accuracy(r.confusion)));
  CHECK(r.precision == doctest::Approx(2.0 / 3.0));
  CHECK(r.recall == doctest::Approx(0.5));
  CHECK(r.f1 == doctest::Approx(2.0 * (2.0 / 3.0) * 0.5 / (2.0 / 3.0 + 0.5)));
  CHECK(r.roc_auc == doctest::Approx(pairwise_auc(labels, probas)));
  CHECK(r.log_loss == doctest::Approx(log_loss(labels, probas)));
  CHECK(r.threshold == 0.5);

  SUBCASE("threshold is honored, not assumed") {
    const EvalReport strict = evaluate(labels, probas, 0.85);
    CHECK(strict.confusion == Confusion{1, 0, 3, 6});
    CHECK(strict.threshold == 0.85);
    CHECK(strict.roc_auc == r.roc_auc);  // threshold-free
  }
}

TEST_CASE("report JSON carries the exact key set") {
  EvalReport r = evaluate({1, 0}, {0.8, 0.3}, 0.5);
  const auto doc = nlohmann::json::parse(report_to_json(r));

  const std::vector<std::string> want{"accuracy", "precision", "recall", "f1",
                                      "roc_auc",  "log_loss",  "threshold", "confusion"};
  CHECK(doc.size() == want.size());
  for (const auto& key : want) CHECK(doc.contains(key));
  CHECK(doc["confusion"].size() == 4);
  for (const char* key : {"tp", "fp", "fn", "tn"}) CHECK(doc["confusion"].contains(key));

  CHECK(doc["accuracy"].get<double>() == doctest::Approx(1.0));
  CHECK(doc["confusion"]["tp"].get<std::int64_t>() == 1);
  CHECK(doc["confusion"]["tn"].get<std::int64_t>() == 1);
  CHECK(report_to_json(r).back() == '\n');
}
