#pragma once

#include <optional>
#include <string>
#include <vector>

#include "retlab/date.hpp"
#include "retlab/schema.hpp"

namespace retlab {

// One academic trajectory as exported from the student management system.
struct StudentRecord {
  std::string id;
  int gender = 0;  // {0,1}
  Date entry_date;
  Date last_activity_date;
  std::optional<Date> birth_date;
  // Used when no birth date is on file.
  std::optional<double> age_at_last_activity;
  bool completed = false;
  bool enrolled_2020 = false;
  bool has_equivalencies = false;
  double grade_sum = 0.0;
  int exam_count = 0;            // NumerodeExamenes
  int courses_taken_total = 0;   // NumeroTotalCursadas
  int courses_regularised = 0;   // NumeroRegulares
  int courses_retaken = 0;       // NumeroRecursadas
  int courses_libres = 0;        // NumeroLibres
  int courses_promoted = 0;      // NumeroPromociones
  int courses_passed = 0;        // NumeroAprobados
  int exams_failed = 0;          // NumerodeReprobados
  int exams_absent = 0;          // NumerodeAusentes
  int max_reg_accum = 0;         // MaxRegAcum
};

// Observation window of the study, inclusive years.
struct StudyWindow {
  int first_year = 2005;
  int last_year = 2019;
};

// Throws DataError naming the offending field. Checks date ordering,
// non-negative counts, gender domain, and that a completed degree has some
// recorded activity behind it.
void validate_record(const StudentRecord& r);

// Completion year of a completed record; the last recorded activity dates it.
// Total over valid records: completions after the window count as still
// enrolled at the window's end.
CohortLabel label_student(const StudentRecord& r, const StudyWindow& window = {});

// Drops every record with has_equivalencies set, keeping input order.
std::vector<StudentRecord> apply_exclusions(const std::vector<StudentRecord>& cohort);

// Derives the 14 predictors plus the dropout label. Tenure uses a
// 365.25-day year; age comes from the birth date when present, otherwise
// from age_at_last_activity; a record with no exams gets PromedioNotas 0.
FeatureVector extract_features(const StudentRecord& r, const StudyWindow& window = {});

}  // namespace retlab
