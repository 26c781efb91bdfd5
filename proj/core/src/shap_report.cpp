#include "retlab/shap_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "retlab/errors.hpp"
#include "retlab/io.hpp"

namespace retlab {
namespace {

std::size_t checked_feature_index(std::string_view name) {
  const std::size_t f = feature_index(name);
  if (f >= kNumFeatures) throw ConfigError("unknown feature: " + std::string(name));
  return f;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;

  double to_px(double v, double px_lo, double px_hi) const {
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

Axis axis_over(const std::vector<DependencePoint>& pts, bool take_phi) {
  Axis a;
  if (pts.empty()) return a;
  a.lo = a.hi = take_phi ? pts[0].phi : pts[0].value;
  for (const DependencePoint& p : pts) {
    const double v = take_phi ? p.phi : p.value;
    a.lo = std::min(a.lo, v);
    a.hi = std::max(a.hi, v);
  }
  if (a.lo == a.hi) {
    a.lo -= 0.5;
    a.hi += 0.5;
  }
  return a;
}

}  // namespace

ImportanceTable importance_table(const std::vector<ShapVector>& rows) {
  if (rows.empty()) throw DataError("importance table needs at least one explained row");
  ImportanceTable table;
  table.reserve(kNumFeatures);
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    double sum = 0.0;
    for (const ShapVector& r : rows) sum += std::abs(r.phi[f]);
    table.push_back({std::string(kFeatureNames[f]), sum / static_cast<double>(rows.size())});
  }
  std::stable_sort(table.begin(), table.end(), [](const auto& a, const auto& b) {
    return a.importance > b.importance;
  });
  return table;
}

DependenceSeries dependence_series(std::string_view feature, const Cohort& xs,
                                   const std::vector<ShapVector>& rows) {
  const std::size_t f = checked_feature_index(feature);
  if (xs.size() != rows.size()) {
    throw DataError("dependence series: dataset and attribution row counts differ");
  }
  DependenceSeries series;
  series.feature = std::string(feature);
  series.points.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    series.points.push_back({xs[i].values[f], rows[i].phi[f]});
  }
  std::stable_sort(series.points.begin(), series.points.end(),
                   [](const auto& a, const auto& b) { return a.value < b.value; });
  return series;
}

InteractionSeries interaction_dependence(std::string_view feature_i,
                                         std::string_view feature_j, const Cohort& xs,
                                         const std::vector<InteractionMatrix>& rows) {
  const std::size_t fi = checked_feature_index(feature_i);
  const std::size_t fj = checked_feature_index(feature_j);
  if (fi == fj) {
    throw ConfigError("interaction dependence needs two distinct features, got " +
                      std::string(feature_i) + " twice");
  }
  if (xs.size() != rows.size()) {
    throw DataError("interaction dependence: dataset and attribution row counts differ");
  }
  InteractionSeries series;
  series.feature_i = std::string(feature_i);
  series.feature_j = std::string(feature_j);
  series.points.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    series.points.push_back({xs[i].values[fi], xs[i].values[fj], rows[i].values[fi][fj]});
  }
  return series;
}

std::string shap_matrix_csv(const std::vector<ShapVector>& rows) {
  std::string out;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    out += kFeatureNames[f];
    out += "_shap,";
  }
  out += "base_value\n";
  for (const ShapVector& r : rows) {
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      out += format_double(r.phi[f]);
      out += ',';
    }
    out += format_double(r.base_value);
    out += '\n';
  }
  return out;
}

std::string importance_table_csv(const ImportanceTable& table) {
  std::string out = "variable,shapley_number\n";
  for (const ImportanceRow& row : table) {
    out += row.feature;
    out += "_shap,";
    out += format_double(row.importance);
    out += '\n';
  }
  return out;
}

std::string importance_table_text(const ImportanceTable& table) {
  const std::string left_header = "Variable";
  const std::string right_header = "Shapley Number";
  std::size_t left_width = left_header.size();
  std::size_t right_width = right_header.size();
  for (const ImportanceRow& row : table) {
    left_width = std::max(left_width, row.feature.size() + 5);  // "_shap"
    right_width = std::max(right_width, fixed3(row.importance).size());
  }

  std::string out;
  out += left_header;
  out.append(left_width - left_header.size() + 2, ' ');
  out.append(right_width - right_header.size(), ' ');
  out += right_header;
  out += '\n';
  for (const ImportanceRow& row : table) {
    const std::string name = row.feature + "_shap";
    const std::string value = fixed3(row.importance);
    out += name;
    out.append(left_width - name.size() + 2, ' ');
    out.append(right_width - value.size(), ' ');
    out += value;
    out += '\n';
  }
  return out;
}

std::string dependence_csv(const DependenceSeries& series) {
  std::string out = "value,shap\n";
  for (const DependencePoint& p : series.points) {
    out += format_double(p.value);
    out += ',';
    out += format_double(p.phi);
    out += '\n';
  }
  return out;
}

std::string dependence_svg(const DependenceSeries& series) {
  constexpr double kWidth = 640;
  constexpr double kLeft = 64, kRight = 612, kTop = 44, kBottom = 432;
  const Axis x = axis_over(series.points, false);
  const Axis y = axis_over(series.points, true);

  char buf[256];
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.0f\" y=\"26\" text-anchor=\"middle\" "
                "font-family=\"sans-serif\" font-size=\"16\">%s</text>\n",
                kWidth / 2, series.feature.c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"16\" y=\"%.0f\" font-family=\"sans-serif\" font-size=\"12\" "
                "transform=\"rotate(-90 16 %.0f)\" text-anchor=\"middle\">shap "
                "value</text>\n",
                (kTop + kBottom) / 2, (kTop + kBottom) / 2);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                "stroke=\"black\"/>\n",
                kLeft, kBottom, kRight, kBottom);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                "stroke=\"black\"/>\n",
                kLeft, kBottom, kLeft, kTop);
  svg += buf;

  if (y.lo < 0.0 && y.hi > 0.0) {
    const double zero_px = y.to_px(0.0, kBottom, kTop);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n",
                  kLeft, zero_px, kRight, zero_px);
    svg += buf;
  }

  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                "font-size=\"11\">%s</text>\n",
                kLeft, kBottom + 16, tick_label(x.lo).c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" "
                "font-family=\"sans-serif\" font-size=\"11\">%s</text>\n",
                kRight, kBottom + 16, tick_label(x.hi).c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" "
                "font-family=\"sans-serif\" font-size=\"11\">%s</text>\n",
                kLeft - 6, kBottom + 4, tick_label(y.lo).c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" "
                "font-family=\"sans-serif\" font-size=\"11\">%s</text>\n",
                kLeft - 6, kTop + 4, tick_label(y.hi).c_str());
  svg += buf;

  for (const DependencePoint& p : series.points) {
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\" fill=\"#1f77b4\" "
                  "fill-opacity=\"0.55\"/>\n",
                  x.to_px(p.value, kLeft, kRight), y.to_px(p.phi, kBottom, kTop));
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

std::string interaction_csv(const InteractionSeries& series) {
  std::string out;
  out += series.feature_i;
  out += ',';
  out += series.feature_j;
  out += ",interaction_shap\n";
  for (const InteractionPoint& p : series.points) {
    out += format_double(p.value_i);
    out += ',';
    out += format_double(p.value_j);
    out += ',';
    out += format_double(p.phi);
    out += '\n';
  }
  return out;
}

}  // namespace retlab
