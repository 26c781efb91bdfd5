#include "retlab/shap_oracle.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <string>

#include "retlab/errors.hpp"

namespace retlab {
namespace {

// mask has one bit per schema feature; set bits follow x's path.
double node_value(const DecisionTree& t, int idx, const FeatureVector& x,
                  std::uint32_t mask) {
  const TreeNode& node = t.nodes[static_cast<std::size_t>(idx)];
  if (node.is_leaf()) return node.value;
  if (node.cover <= 0) {
    throw DataError("model integrity: node " + std::to_string(idx) + " has zero cover");
  }
  if (mask >> node.feature & 1u) {
    const int next =
        x.values[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                           : node.right;
    return node_value(t, next, x, mask);
  }
  const double cl = static_cast<double>(t.nodes[static_cast<std::size_t>(node.left)].cover);
  const double cr = static_cast<double>(t.nodes[static_cast<std::size_t>(node.right)].cover);
  return (node_value(t, node.left, x, mask) * cl +
          node_value(t, node.right, x, mask) * cr) /
         (cl + cr);
}

double value_with_mask(const Ensemble& m, const FeatureVector& x, std::uint32_t mask) {
  double v = m.base_score;
  for (const DecisionTree& t : m.trees) {
    internal_check(!t.nodes.empty(), "subset_value on an empty tree");
    v += node_value(t, 0, x, mask);
  }
  return v;
}

std::array<double, kOracleFeatureLimit + 1> factorials() {
  std::array<double, kOracleFeatureLimit + 1> f{};
  f[0] = 1.0;
  for (int i = 1; i <= kOracleFeatureLimit; ++i) f[i] = f[i - 1] * i;
  return f;
}

void check_used_limit(int k) {
  if (k > kOracleFeatureLimit) {
    throw ConfigError("brute-force Shapley enumerates 2^k subsets and supports at most " +
                      std::to_string(kOracleFeatureLimit) + " used features; model uses " +
                      std::to_string(k));
  }
}

// v(S) for every subset of `used`, indexed by the compact k-bit mask.
std::vector<double> all_subset_values(const Ensemble& m, const FeatureVector& x,
                                      const std::vector<int>& used) {
  const int k = static_cast<int>(used.size());
  std::vector<double> v(std::size_t{1} << k);
  for (std::uint32_t s = 0; s < v.size(); ++s) {
    std::uint32_t mask = 0;
    for (int b = 0; b < k; ++b) {
      if (s >> b & 1u) mask |= 1u << used[static_cast<std::size_t>(b)];
    }
    v[s] = value_with_mask(m, x, mask);
  }
  return v;
}

}  // namespace

double subset_value(const Ensemble& m, const FeatureVector& x,
                    const std::vector<int>& subset) {
  std::uint32_t mask = 0;
  for (int f : subset) {
    internal_check(f >= 0 && f < static_cast<int>(kNumFeatures),
                   "subset_value feature index out of range");
    mask |= 1u << f;
  }
  return value_with_mask(m, x, mask);
}

ShapVector brute_force_shapley(const Ensemble& m, const FeatureVector& x) {
  const std::vector<int> used = used_features(m);
  const int k = static_cast<int>(used.size());
  check_used_limit(k);

  const auto fact = factorials();
  const std::vector<double> v = all_subset_values(m, x, used);

  ShapVector out;
  out.base_value = v[0];
  for (int b = 0; b < k; ++b) {
    double phi = 0.0;
    for (std::uint32_t s = 0; s < v.size(); ++s) {
      if (s >> b & 1u) continue;
      const int size_s = std::popcount(s);
      const double w = fact[static_cast<std::size_t>(size_s)] *
                       fact[static_cast<std::size_t>(k - size_s - 1)] /
                       fact[static_cast<std::size_t>(k)];
      phi += w * (v[s | (1u << b)] - v[s]);
    }
    out.phi[static_cast<std::size_t>(used[static_cast<std::size_t>(b)])] = phi;
  }
  return out;
}

double brute_force_interaction(const Ensemble& m, const FeatureVector& x, int i, int j) {
  if (i == j) throw ConfigError("interaction needs two distinct features");
  internal_check(i >= 0 && i < static_cast<int>(kNumFeatures) && j >= 0 &&
                     j < static_cast<int>(kNumFeatures),
                 "interaction feature index out of range");

  const std::vector<int> used = used_features(m);
  const int k = static_cast<int>(used.size());
  check_used_limit(k);

  int bi = -1, bj = -1;
  for (int b = 0; b < k; ++b) {
    if (used[static_cast<std::size_t>(b)] == i) bi = b;
    if (used[static_cast<std::size_t>(b)] == j) bj = b;
  }
  if (bi < 0 || bj < 0) return 0.0;

  const auto fact = factorials();
  const std::vector<double> v = all_subset_values(m, x, used);
  const std::uint32_t mi = 1u << bi;
  const std::uint32_t mj = 1u << bj;

  double total = 0.0;
  for (std::uint32_t s = 0; s < v.size(); ++s) {
    if (s & (mi | mj)) continue;
    const int size_s = std::popcount(s);
    const double w = fact[static_cast<std::size_t>(size_s)] *
                     fact[static_cast<std::size_t>(k - size_s - 2)] /
                     (2.0 * fact[static_cast<std::size_t>(k - 1)]);
    total += w * (v[s | mi | mj] - v[s | mi] - v[s | mj] + v[s]);
  }
  return total;
}

}  // namespace retlab
