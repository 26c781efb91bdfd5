#include "retlab/cohort_csv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "retlab/errors.hpp"
#include "retlab/io.hpp"

namespace retlab {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

LoadedCohort load_cohort_csv(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);

  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "': missing header row");

  const auto header = split_csv_line(line);
  // One position per schema column plus the label, resolved by name.
  std::vector<std::size_t> column_of(kNumFeatures + 1, header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name = trimmed(header[c]);
    const std::size_t f = feature_index(name);
    std::size_t slot;
    if (f < kNumFeatures) {
      slot = f;
    } else if (name == kLabelName) {
      slot = kNumFeatures;
    } else {
      throw DataError("'" + path + "': unknown column '" + name + "'");
    }
    if (column_of[slot] != header.size()) {
      throw DataError("'" + path + "': duplicate column '" + name + "'");
    }
    column_of[slot] = c;
  }
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    if (column_of[f] == header.size()) {
      throw DataError("'" + path + "': missing column '" + std::string(kFeatureNames[f]) + "'");
    }
  }
  if (column_of[kNumFeatures] == header.size()) {
    throw DataError("'" + path + "': missing column '" + std::string(kLabelName) + "'");
  }

  LoadedCohort out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    out.report.rows_read++;

    const auto fields = split_csv_line(line);
    auto reject = [&](const std::string& msg) {
      out.report.rows_rejected++;
      out.report.row_errors.push_back({line_no, msg});
    };

    if (fields.size() != header.size()) {
      reject("expected " + std::to_string(header.size()) + " fields, got " +
             std::to_string(fields.size()));
      continue;
    }

    FeatureVector v;
    bool ok = true;
    for (std::size_t f = 0; f <= kNumFeatures && ok; ++f) {
      const std::string cell = trimmed(fields[column_of[f]]);
      double value = 0.0;
      if (!parse_double(cell, value) || !std::isfinite(value)) {
        const std::string name =
            f < kNumFeatures ? std::string(kFeatureNames[f]) : std::string(kLabelName);
        reject("non-numeric value '" + cell + "' in column '" + name + "'");
        ok = false;
        break;
      }
      if (f < kNumFeatures) {
        v.values[f] = value;
      } else {
        if (value != 0.0 && value != 1.0) {
          reject("label '" + cell + "' is not 0 or 1");
          ok = false;
          break;
        }
        v.label = static_cast<int>(value);
      }
    }
    if (ok) out.rows.push_back(v);
  }
  return out;
}

std::string cohort_to_csv(const Cohort& cohort) {
  std::string out;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    out += kFeatureNames[f];
    out += ',';
  }
  out += kLabelName;
  out += '\n';
  for (const auto& row : cohort) {
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      out += format_double(row.values[f]);
      out += ',';
    }
    out += row.label ? '1' : '0';
    out += '\n';
  }
  return out;
}

void save_cohort_csv(const std::string& path, const Cohort& cohort) {
  atomic_write_file(path, cohort_to_csv(cohort));
}

}  // namespace retlab
