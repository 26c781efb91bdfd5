#pragma once

#include <cstdint>
#include <vector>

#include "retlab/schema.hpp"

namespace retlab {

// Histogram-binned view of a cohort. Bin indices need 16 bits: max_bin may
// exceed 256. bin_upper_bounds[f][b] is the raw-value upper edge of bin b
// (midpoint to the next distinct value; last edge is +inf), so raw-space
// thresholds route exactly like bins: value <= edge  <=>  bin <= b.
struct BinnedDataset {
  std::vector<std::uint16_t> bin_index;             // n_rows x kNumFeatures, row-major
  std::vector<std::vector<double>> bin_upper_bounds;  // per feature, sorted
  std::vector<std::uint8_t> labels;
  std::size_t n_rows = 0;

  std::uint16_t bin(std::size_t row, std::size_t feature) const {
    return bin_index[row * kNumFeatures + feature];
  }
  std::size_t n_bins(std::size_t feature) const { return bin_upper_bounds[feature].size(); }
};

// Distinct-value quantile cuts, at most max_bin bins per feature; every
// distinct value gets its own bin when there are few enough.
BinnedDataset bin_features(const Cohort& rows, int max_bin);

// Bins rows against boundaries from an existing dataset, for held-out data.
BinnedDataset bin_with_bounds(const Cohort& rows,
                              const std::vector<std::vector<double>>& bounds);

}  // namespace retlab
