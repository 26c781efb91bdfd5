#include "retlab/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "retlab/errors.hpp"

namespace retlab {

namespace {

// Upper edges from sorted (value, count) pairs: close a bin whenever the
// cumulative count crosses the next equal-count quantile target. Edges sit
// midway between adjacent distinct values; the top edge is +inf.
std::vector<double> quantile_edges(const std::vector<std::pair<double, std::size_t>>& distinct,
                                   std::size_t n_rows, std::size_t max_bin) {
  std::vector<double> edges;
  if (distinct.size() <= max_bin) {
    edges.reserve(distinct.size());
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
      edges.push_back(0.5 * (distinct[i].first + distinct[i + 1].first));
    }
    edges.push_back(std::numeric_limits<double>::infinity());
    return edges;
  }

  const double target = static_cast<double>(n_rows) / static_cast<double>(max_bin);
  std::size_t cum = 0;
  std::size_t bins_closed = 0;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    cum += distinct[i].second;
    const bool last_value = i + 1 == distinct.size();
    if (last_value) {
      edges.push_back(std::numeric_limits<double>::infinity());
      break;
    }
    if (static_cast<double>(cum) >= target * static_cast<double>(bins_closed + 1)) {
      edges.push_back(0.5 * (distinct[i].first + distinct[i + 1].first));
      ++bins_closed;
    }
  }
  return edges;
}

std::uint16_t bin_of(const std::vector<double>& edges, double value) {
  const auto it = std::lower_bound(edges.begin(), edges.end(), value);
  const std::size_t b = static_cast<std::size_t>(it - edges.begin());
  // value > every finite edge lands in the last (+inf) bin
  return static_cast<std::uint16_t>(std::min(b, edges.size() - 1));
}

}  // namespace

BinnedDataset bin_features(const Cohort& rows, int max_bin) {
  if (rows.empty()) throw DataError("cannot bin an empty cohort");
  if (max_bin < 2) throw ConfigError("max_bin must be at least 2");

  BinnedDataset ds;
  ds.n_rows = rows.size();
  ds.bin_index.resize(rows.size() * kNumFeatures);
  ds.bin_upper_bounds.resize(kNumFeatures);
  ds.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ds.labels[i] = static_cast<std::uint8_t>(rows[i].label);
  }

  std::vector<double> column(rows.size());
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double v = rows[i].values[f];
      if (!std::isfinite(v)) {
        throw DataError("non-finite value in row " + std::to_string(i) + ", feature '" +
                        std::string(kFeatureNames[f]) + "'");
      }
      column[i] = v;
    }
    std::vector<double> sorted = column;
    std::sort(sorted.begin(), sorted.end());

    std::vector<std::pair<double, std::size_t>> distinct;
    for (double v : sorted) {
      if (distinct.empty() || distinct.back().first != v) {
        distinct.emplace_back(v, 1);
      } else {
        distinct.back().second++;
      }
    }

    ds.bin_upper_bounds[f] =
        quantile_edges(distinct, rows.size(), static_cast<std::size_t>(max_bin));
    const auto& edges = ds.bin_upper_bounds[f];
    internal_check(edges.size() <= static_cast<std::size_t>(max_bin) && !edges.empty(),
                   "bin count out of range");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ds.bin_index[i * kNumFeatures + f] = bin_of(edges, column[i]);
    }
  }
  return ds;
}

BinnedDataset bin_with_bounds(const Cohort& rows,
                              const std::vector<std::vector<double>>& bounds) {
  if (bounds.size() != kNumFeatures) throw DataError("bin boundaries do not match the schema");
  BinnedDataset ds;
  ds.n_rows = rows.size();
  ds.bin_index.resize(rows.size() * kNumFeatures);
  ds.bin_upper_bounds = bounds;
  ds.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ds.labels[i] = static_cast<std::uint8_t>(rows[i].label);
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      const double v = rows[i].values[f];
      if (!std::isfinite(v)) {
        throw DataError("non-finite value in row " + std::to_string(i) + ", feature '" +
                        std::string(kFeatureNames[f]) + "'");
      }
      ds.bin_index[i * kNumFeatures + f] = bin_of(bounds[f], v);
    }
  }
  return ds;
}

}  // namespace retlab
