#pragma once

#include <string>
#include <vector>

#include "retlab/schema.hpp"

namespace retlab {

struct CsvRowError {
  std::size_t line = 0;  // 1-based, header is line 1
  std::string message;
};

struct ParseReport {
  std::size_t rows_read = 0;
  std::size_t rows_rejected = 0;
  std::vector<CsvRowError> row_errors;
};

struct LoadedCohort {
  Cohort rows;
  ParseReport report;
};

// Header must hold exactly the 14 schema names plus Abandono, any column
// order. Malformed rows are rejected and reported; a bad header throws
// DataError naming the column.
LoadedCohort load_cohort_csv(const std::string& path);

// Canonical column order, shortest round-trip numbers, written atomically.
void save_cohort_csv(const std::string& path, const Cohort& cohort);

std::string cohort_to_csv(const Cohort& cohort);

}  // namespace retlab
