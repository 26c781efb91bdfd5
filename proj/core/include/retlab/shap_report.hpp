#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "retlab/schema.hpp"
#include "retlab/shap.hpp"

namespace retlab {

struct ImportanceRow {
  std::string feature;
  double importance = 0.0;
};

// One row per schema feature, importance = mean |phi| over the explained
// rows, sorted descending with schema order breaking ties.
using ImportanceTable = std::vector<ImportanceRow>;

ImportanceTable importance_table(const std::vector<ShapVector>& rows);

struct DependencePoint {
  double value = 0.0;
  double phi = 0.0;
};

// (raw value, phi) pairs for one feature, sorted by raw value. Positive
// phi pushes toward dropout.
struct DependenceSeries {
  std::string feature;
  std::vector<DependencePoint> points;
};

DependenceSeries dependence_series(std::string_view feature, const Cohort& xs,
                                   const std::vector<ShapVector>& rows);

struct InteractionPoint {
  double value_i = 0.0;
  double value_j = 0.0;
  double phi = 0.0;
};

// Off-diagonal interaction triples in dataset order.
struct InteractionSeries {
  std::string feature_i;
  std::string feature_j;
  std::vector<InteractionPoint> points;
};

InteractionSeries interaction_dependence(std::string_view feature_i,
                                         std::string_view feature_j, const Cohort& xs,
                                         const std::vector<InteractionMatrix>& rows);

// One `<feature>_shap` column per schema feature plus `base_value`.
std::string shap_matrix_csv(const std::vector<ShapVector>& rows);

std::string importance_table_csv(const ImportanceTable& table);

// Table-1-style layout: "Variable / Shapley Number", three decimals.
std::string importance_table_text(const ImportanceTable& table);

std::string dependence_csv(const DependenceSeries& series);

// Self-contained scatter plot with a dashed zero line.
std::string dependence_svg(const DependenceSeries& series);

std::string interaction_csv(const InteractionSeries& series);

}  // namespace retlab
