#include "retlab/schema.hpp"

namespace retlab {

std::size_t feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (kFeatureNames[i] == name) return i;
  }
  return kNumFeatures;
}

std::string_view to_string(CohortLabel label) {
  switch (label) {
    case CohortLabel::Graduated: return "Graduated";
    case CohortLabel::Permanent: return "Permanent";
    case CohortLabel::Dropout: return "Dropout";
  }
  return "?";
}

}  // namespace retlab
