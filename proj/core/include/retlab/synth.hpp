#pragma once

#include <cstdint>

#include "retlab/schema.hpp"

namespace retlab {

struct SynthConfig {
  std::size_t n_students = 0;
  std::uint64_t seed = 0;
  double dropout_base_rate = 0.5;  // in (0,1)
  double noise_scale = 0.5;        // >= 0, sd of unexplained logit noise
};

// Throws ConfigError on out-of-range fields.
void validate(const SynthConfig& cfg);

// Seeded stand-in for the real cohort. Dropout odds fall with short tenure,
// rise past six years, rise with last-activity age through the twenties,
// fall with many regularised courses and rise with many failed exams. The
// intercept is calibrated so the expected dropout rate equals
// dropout_base_rate. Output is byte-identical across platforms: the
// generator sticks to arithmetic the FP standard pins down exactly.
Cohort synth_cohort(const SynthConfig& cfg);

}  // namespace retlab
