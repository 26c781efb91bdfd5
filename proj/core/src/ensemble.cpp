#include "retlab/ensemble.hpp"

#include <cmath>

#include "nlohmann/json.hpp"
#include "retlab/errors.hpp"
#include "retlab/io.hpp"

namespace retlab {

using ordered_json = nlohmann::ordered_json;

void validate(const TrainConfig& cfg) {
  if (cfg.max_bin < 2) throw ConfigError("max_bin must be at least 2");
  if (!(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0)) {
    throw ConfigError("learning_rate must lie in (0,1]");
  }
  if (cfg.num_leaves < 2) throw ConfigError("num_leaves must be at least 2");
  if (cfg.min_data < 1) throw ConfigError("min_data must be at least 1");
  if (cfg.num_iterations < 0) throw ConfigError("num_iterations must be non-negative");
  if (!(cfg.split_ratio > 0.0 && cfg.split_ratio < 1.0)) {
    throw ConfigError("split_ratio must lie in (0,1)");
  }
  if (cfg.early_stopping_rounds && *cfg.early_stopping_rounds < 1) {
    throw ConfigError("early_stopping_rounds must be positive");
  }
}

double sigmoid(double margin) { return 1.0 / (1.0 + std::exp(-margin)); }

double Ensemble::predict_margin(const FeatureVector& x) const {
  double margin = base_score;
  for (const auto& tree : trees) margin += tree.predict(x);
  return margin;
}

double Ensemble::predict_proba(const FeatureVector& x) const {
  return sigmoid(predict_margin(x));
}

std::string ensemble_to_json(const Ensemble& m) {
  ordered_json doc;
  doc["format_version"] = 1;
  doc["schema"] = ordered_json::array();
  for (const auto& name : kFeatureNames) doc["schema"].push_back(std::string(name));
  doc["base_score"] = m.base_score;

  ordered_json cfg;
  cfg["max_bin"] = m.config.max_bin;
  cfg["learning_rate"] = m.config.learning_rate;
  cfg["num_leaves"] = m.config.num_leaves;
  cfg["min_data"] = m.config.min_data;
  cfg["num_iterations"] = m.config.num_iterations;
  cfg["boost_from_average"] = m.config.boost_from_average;
  cfg["lambda_l2"] = m.config.lambda_l2;
  cfg["split_ratio"] = m.config.split_ratio;
  cfg["seed"] = m.config.seed;
  cfg["stratified"] = m.config.stratified;
  if (m.config.early_stopping_rounds) {
    cfg["early_stopping_rounds"] = *m.config.early_stopping_rounds;
  }
  doc["config"] = std::move(cfg);
  doc["train_rows"] = m.train_rows;

  ordered_json trees = ordered_json::array();
  for (const auto& tree : m.trees) {
    ordered_json nodes = ordered_json::array();
    for (const auto& node : tree.nodes) {
      ordered_json n;
      if (node.is_leaf()) {
        n["value"] = node.value;
        n["cover"] = node.cover;
      } else {
        n["feature"] = node.feature;
        n["threshold"] = node.threshold;
        n["left"] = node.left;
        n["right"] = node.right;
        n["cover"] = node.cover;
      }
      nodes.push_back(std::move(n));
    }
    trees.push_back(std::move(nodes));
  }
  doc["trees"] = std::move(trees);
  return doc.dump(2) + "\n";
}

Ensemble ensemble_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }

  try {
    Ensemble m;
    const auto& schema = doc.at("schema");
    if (schema.size() != kNumFeatures) {
      throw DataError("model schema has " + std::to_string(schema.size()) +
                      " features, expected " + std::to_string(kNumFeatures));
    }
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      if (schema[f].get<std::string>() != kFeatureNames[f]) {
        throw DataError("model schema column " + std::to_string(f) + " is '" +
                        schema[f].get<std::string>() + "', expected '" +
                        std::string(kFeatureNames[f]) + "'");
      }
    }
    m.base_score = doc.at("base_score").get<double>();

    const auto& cfg = doc.at("config");
    m.config.max_bin = cfg.at("max_bin").get<int>();
    m.config.learning_rate = cfg.at("learning_rate").get<double>();
    m.config.num_leaves = cfg.at("num_leaves").get<int>();
    m.config.min_data = cfg.at("min_data").get<int>();
    m.config.num_iterations = cfg.at("num_iterations").get<int>();
    m.config.boost_from_average = cfg.at("boost_from_average").get<bool>();
    m.config.lambda_l2 = cfg.at("lambda_l2").get<double>();
    m.config.split_ratio = cfg.at("split_ratio").get<double>();
    m.config.seed = cfg.at("seed").get<std::uint64_t>();
    m.config.stratified = cfg.at("stratified").get<bool>();
    if (cfg.contains("early_stopping_rounds")) {
      m.config.early_stopping_rounds = cfg.at("early_stopping_rounds").get<int>();
    }
    m.train_rows = doc.at("train_rows").get<std::int64_t>();

    for (const auto& tree_json : doc.at("trees")) {
      DecisionTree tree;
      for (const auto& n : tree_json) {
        TreeNode node;
        node.cover = n.at("cover").get<std::int64_t>();
        if (n.contains("feature")) {
          node.feature = n.at("feature").get<int>();
          node.threshold = n.at("threshold").get<double>();
          node.left = n.at("left").get<int>();
          node.right = n.at("right").get<int>();
        } else {
          node.value = n.at("value").get<double>();
        }
        tree.nodes.push_back(node);
      }
      tree.validate();
      m.trees.push_back(std::move(tree));
    }
    return m;
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void save_ensemble(const std::string& path, const Ensemble& m) {
  atomic_write_file(path, ensemble_to_json(m));
}

Ensemble load_ensemble(const std::string& path) { return ensemble_from_json(read_file(path)); }

}  // namespace retlab
