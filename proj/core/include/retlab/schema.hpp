#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace retlab {

// Canonical predictor order. Model files, SHAP output and report tables all
// use this order; it matches the importance-table row set.
inline constexpr std::size_t kNumFeatures = 14;

inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "Genero",
    "EdadUltimaActividad",
    "TiempoFacultad",
    "PromedioNotas",
    "NumeroTotalCursadas",
    "NumeroRegulares",
    "NumeroRecursadas",
    "NumeroLibres",
    "NumerodeExamenes",
    "NumeroPromociones",
    "NumeroAprobados",
    "NumerodeReprobados",
    "NumerodeAusentes",
    "MaxRegAcum",
};

inline constexpr std::string_view kLabelName = "Abandono";

// Index of `name` in kFeatureNames, or kNumFeatures if unknown.
std::size_t feature_index(std::string_view name);

enum class CohortLabel { Graduated, Permanent, Dropout };

std::string_view to_string(CohortLabel label);

// One modelling row: the 14 predictors in canonical order plus the binary
// dropout label (1 = dropout).
struct FeatureVector {
  std::array<double, kNumFeatures> values{};
  int label = 0;

  bool operator==(const FeatureVector&) const = default;
};

using Cohort = std::vector<FeatureVector>;

}  // namespace retlab
