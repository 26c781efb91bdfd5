#pragma once

#include <string>

#include "retlab/ensemble.hpp"

namespace retlab {

// Flat `key = value` config using the upstream tool's parameter
// spellings: max_bin, learning_rate, boosting_type, objective, metric,
// num_leaves, verbose, min_data, boost_from_average. Mentioned keys
// overwrite cfg; unknown or duplicate keys are errors. boosting_type,
// objective, metric and verbose accept only gbdt / binary /
// binary_logloss / -1 and change nothing.
void apply_config_text(const std::string& text, TrainConfig& cfg);

void apply_config_file(const std::string& path, TrainConfig& cfg);

}  // namespace retlab
