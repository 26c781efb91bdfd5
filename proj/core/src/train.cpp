#include "retlab/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "retlab/errors.hpp"

namespace retlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Fisher-Yates with an explicit index draw; std::shuffle leaves the draw
// sequence implementation-defined.
void seeded_shuffle(std::vector<std::size_t>& idx, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(eng() % (idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
}

double mean_logloss(const std::vector<std::uint8_t>& labels,
                    const std::vector<double>& margins) {
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    // -log sigmoid(m) for y=1, -log sigmoid(-m) for y=0, stably:
    const double m = labels[i] ? margins[i] : -margins[i];
    sum += m < -30.0 ? -m : std::log1p(std::exp(-m));
  }
  return sum / static_cast<double>(labels.size());
}

struct SplitCandidate {
  double gain = kNegInf;
  std::size_t feature = 0;
  int bin = -1;  // rows with bin <= this go left
  double gl = 0.0, hl = 0.0;
  std::int64_t count_left = 0;
};

struct LeafState {
  std::vector<std::size_t> rows;
  int node = 0;  // index into the growing tree
  double sum_g = 0.0;
  double sum_h = 0.0;
  SplitCandidate best;
};

// Scans every feature histogram of one leaf for its best split under the
// deterministic tie-break: strictly greater gain wins, so earlier features
// and lower bins win ties.
void find_best_split(const BinnedDataset& data, const std::vector<double>& g,
                     const std::vector<double>& h, const TrainConfig& cfg, LeafState& leaf) {
  leaf.best = SplitCandidate{};
  const double lambda = cfg.lambda_l2;

  std::vector<double> hist_g, hist_h;
  std::vector<std::int64_t> hist_n;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    const std::size_t bins = data.n_bins(f);
    if (bins < 2) continue;
    hist_g.assign(bins, 0.0);
    hist_h.assign(bins, 0.0);
    hist_n.assign(bins, 0);
    for (const std::size_t row : leaf.rows) {
      const std::uint16_t b = data.bin(row, f);
      hist_g[b] += g[row];
      hist_h[b] += h[row];
      hist_n[b] += 1;
    }

    double gl = 0.0, hl = 0.0;
    std::int64_t nl = 0;
    const std::int64_t total = static_cast<std::int64_t>(leaf.rows.size());
    for (std::size_t b = 0; b + 1 < bins; ++b) {
      gl += hist_g[b];
      hl += hist_h[b];
      nl += hist_n[b];
      if (nl < cfg.min_data || total - nl < cfg.min_data) continue;
      const double gain = split_gain(gl, hl, leaf.sum_g - gl, leaf.sum_h - hl, lambda);
      if (gain > leaf.best.gain) {
        leaf.best =
            SplitCandidate{gain, f, static_cast<int>(b), gl, hl, nl};
      }
    }
  }
}

double leaf_value(double sum_g, double sum_h, double lambda) {
  const double denom = sum_h + lambda;
  return denom > 0.0 ? -sum_g / denom : 0.0;
}

}  // namespace

std::pair<Cohort, Cohort> split_train_test(const Cohort& cohort, double ratio,
                                           std::uint64_t seed, bool stratified) {
  if (cohort.size() < 2) throw DataError("cohort must have at least 2 rows to split");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must lie in (0,1)");

  Cohort train, test;
  auto split_indices = [&](std::vector<std::size_t> idx, std::uint64_t s) {
    seeded_shuffle(idx, s);
    const std::size_t n_train =
        static_cast<std::size_t>(std::llround(ratio * static_cast<double>(idx.size())));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      (i < n_train ? train : test).push_back(cohort[idx[i]]);
    }
  };

  if (!stratified) {
    std::vector<std::size_t> idx(cohort.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    split_indices(std::move(idx), seed);
  } else {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < cohort.size(); ++i) {
      (cohort[i].label ? pos : neg).push_back(i);
    }
    split_indices(std::move(pos), seed);
    split_indices(std::move(neg), seed + 1);
  }
  return {std::move(train), std::move(test)};
}

double init_base_score(const std::vector<std::uint8_t>& labels) {
  if (labels.empty()) throw DataError("degenerate labels: empty");
  double p = 0.0;
  for (const auto y : labels) p += y;
  p /= static_cast<double>(labels.size());
  if (p <= 0.0 || p >= 1.0) throw DataError("degenerate labels: single class");
  return std::log(p / (1.0 - p));
}

GradientPair logistic_gradients(const std::vector<std::uint8_t>& labels,
                                const std::vector<double>& margins) {
  internal_check(labels.size() == margins.size(), "labels/margins length mismatch");
  GradientPair out;
  out.g.resize(labels.size());
  out.h.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = sigmoid(margins[i]);
    out.g[i] = p - static_cast<double>(labels[i]);
    out.h[i] = p * (1.0 - p);
  }
  return out;
}

double split_gain(double gl, double hl, double gr, double hr, double lambda_l2) {
  const double dl = hl + lambda_l2;
  const double dr = hr + lambda_l2;
  if (dl <= 0.0 || dr <= 0.0) return kNegInf;
  const double parent = gl + gr;
  return 0.5 * (gl * gl / dl + gr * gr / dr - parent * parent / (dl + dr));
}

DecisionTree grow_tree(const BinnedDataset& data, const std::vector<double>& g,
                       const std::vector<double>& h, const TrainConfig& cfg) {
  internal_check(data.n_rows > 0, "grow_tree on empty data");
  internal_check(g.size() == data.n_rows && h.size() == data.n_rows,
                 "gradient length mismatch");

  DecisionTree tree;
  std::vector<LeafState> open;

  LeafState root;
  root.rows.resize(data.n_rows);
  for (std::size_t i = 0; i < data.n_rows; ++i) root.rows[i] = i;
  for (std::size_t i = 0; i < data.n_rows; ++i) {
    root.sum_g += g[i];
    root.sum_h += h[i];
  }
  root.node = 0;
  TreeNode root_node;
  root_node.value = leaf_value(root.sum_g, root.sum_h, cfg.lambda_l2);
  root_node.cover = static_cast<std::int64_t>(data.n_rows);
  tree.nodes.push_back(root_node);
  find_best_split(data, g, h, cfg, root);
  open.push_back(std::move(root));

  std::size_t n_leaves = 1;
  while (n_leaves < static_cast<std::size_t>(cfg.num_leaves)) {
    // Earliest leaf wins exact gain ties.
    std::size_t pick = open.size();
    double best_gain = 0.0;
    for (std::size_t i = 0; i < open.size(); ++i) {
      if (open[i].best.gain > best_gain) {
        best_gain = open[i].best.gain;
        pick = i;
      }
    }
    if (pick == open.size()) break;  // nothing has positive gain

    LeafState leaf = std::move(open[pick]);
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    const SplitCandidate& s = leaf.best;

    LeafState left, right;
    left.rows.reserve(static_cast<std::size_t>(s.count_left));
    right.rows.reserve(leaf.rows.size() - static_cast<std::size_t>(s.count_left));
    for (const std::size_t row : leaf.rows) {
      (data.bin(row, s.feature) <= s.bin ? left : right).rows.push_back(row);
    }
    left.sum_g = s.gl;
    left.sum_h = s.hl;
    right.sum_g = leaf.sum_g - s.gl;
    right.sum_h = leaf.sum_h - s.hl;

    TreeNode& parent = tree.nodes[static_cast<std::size_t>(leaf.node)];
    parent.feature = static_cast<int>(s.feature);
    parent.threshold = data.bin_upper_bounds[s.feature][static_cast<std::size_t>(s.bin)];
    parent.split_bin = s.bin;
    parent.value = 0.0;
    parent.left = static_cast<int>(tree.nodes.size());
    parent.right = static_cast<int>(tree.nodes.size() + 1);
    left.node = parent.left;
    right.node = parent.right;

    TreeNode left_node, right_node;
    left_node.value = leaf_value(left.sum_g, left.sum_h, cfg.lambda_l2);
    left_node.cover = static_cast<std::int64_t>(left.rows.size());
    right_node.value = leaf_value(right.sum_g, right.sum_h, cfg.lambda_l2);
    right_node.cover = static_cast<std::int64_t>(right.rows.size());
    tree.nodes.push_back(left_node);
    tree.nodes.push_back(right_node);

    find_best_split(data, g, h, cfg, left);
    find_best_split(data, g, h, cfg, right);
    open.push_back(std::move(left));
    open.push_back(std::move(right));
    ++n_leaves;
  }
  return tree;
}

namespace {

// Bin-space routing during training; raw thresholds would give the same
// path but the split_bin is already at hand.
int route_by_bins(const DecisionTree& tree, const BinnedDataset& data, std::size_t row) {
  int idx = 0;
  while (!tree.nodes[static_cast<std::size_t>(idx)].is_leaf()) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(idx)];
    idx = data.bin(row, static_cast<std::size_t>(node.feature)) <= node.split_bin ? node.left
                                                                                  : node.right;
  }
  return idx;
}

}  // namespace

TrainResult train(const BinnedDataset& train_data, const BinnedDataset& valid_data,
                  const TrainConfig& cfg) {
  validate(cfg);
  internal_check(train_data.n_rows > 0, "empty training data");

  TrainResult out;
  out.model.config = cfg;
  // Rejects single-class labels before iteration 1 either way.
  const double average_log_odds = init_base_score(train_data.labels);
  out.model.base_score = cfg.boost_from_average ? average_log_odds : 0.0;

  std::vector<double> train_margins(train_data.n_rows, out.model.base_score);
  std::vector<double> valid_margins(valid_data.n_rows, out.model.base_score);

  double best_valid = std::numeric_limits<double>::infinity();
  int rounds_since_best = 0;

  for (int iter = 0; iter < cfg.num_iterations; ++iter) {
    const GradientPair grad = logistic_gradients(train_data.labels, train_margins);
    DecisionTree tree = grow_tree(train_data, grad.g, grad.h, cfg);
    tree.scale(cfg.learning_rate);

    for (std::size_t i = 0; i < train_data.n_rows; ++i) {
      train_margins[i] +=
          tree.nodes[static_cast<std::size_t>(route_by_bins(tree, train_data, i))].value;
    }
    for (std::size_t i = 0; i < valid_data.n_rows; ++i) {
      valid_margins[i] +=
          tree.nodes[static_cast<std::size_t>(route_by_bins(tree, valid_data, i))].value;
    }
    out.model.trees.push_back(std::move(tree));

    out.history.train_logloss.push_back(mean_logloss(train_data.labels, train_margins));
    const double valid_ll = valid_data.n_rows > 0
                                ? mean_logloss(valid_data.labels, valid_margins)
                                : std::numeric_limits<double>::quiet_NaN();
    out.history.valid_logloss.push_back(valid_ll);

    if (cfg.early_stopping_rounds && valid_data.n_rows > 0) {
      if (valid_ll < best_valid) {
        best_valid = valid_ll;
        rounds_since_best = 0;
      } else if (++rounds_since_best >= *cfg.early_stopping_rounds) {
        break;
      }
    }
  }
  return out;
}

PipelineResult train_on_cohort(const Cohort& cohort, const TrainConfig& cfg) {
  validate(cfg);
  auto [train_split, test_split] =
      split_train_test(cohort, cfg.split_ratio, cfg.seed, cfg.stratified);
  const BinnedDataset train_data = bin_features(train_split, cfg.max_bin);
  const BinnedDataset valid_data = bin_with_bounds(test_split, train_data.bin_upper_bounds);

  TrainResult result = train(train_data, valid_data, cfg);
  result.model.train_rows = static_cast<std::int64_t>(cohort.size());

  PipelineResult out;
  out.model = std::move(result.model);
  out.history = std::move(result.history);
  out.train_split = std::move(train_split);
  out.test_split = std::move(test_split);
  return out;
}

}  // namespace retlab
