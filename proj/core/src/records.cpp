#include "retlab/records.hpp"

#include <cmath>

#include "retlab/errors.hpp"

namespace retlab {

namespace {

void require(bool cond, const StudentRecord& r, const std::string& field, const std::string& what) {
  if (!cond) {
    throw DataError("invalid record '" + r.id + "': field " + field + " " + what);
  }
}

}  // namespace

void validate_record(const StudentRecord& r) {
  require(is_valid_date(r.entry_date), r, "entry_date", "is not a valid date");
  require(is_valid_date(r.last_activity_date), r, "last_activity_date", "is not a valid date");
  require(days_from_epoch(r.last_activity_date) >= days_from_epoch(r.entry_date), r,
          "last_activity_date", "precedes entry_date");
  require(r.gender == 0 || r.gender == 1, r, "gender", "must be 0 or 1");
  require(r.exam_count >= 0, r, "exam_count", "must be non-negative");
  require(r.courses_taken_total >= 0, r, "courses_taken_total", "must be non-negative");
  require(r.courses_regularised >= 0, r, "courses_regularised", "must be non-negative");
  require(r.courses_retaken >= 0, r, "courses_retaken", "must be non-negative");
  require(r.courses_libres >= 0, r, "courses_libres", "must be non-negative");
  require(r.courses_promoted >= 0, r, "courses_promoted", "must be non-negative");
  require(r.courses_passed >= 0, r, "courses_passed", "must be non-negative");
  require(r.exams_failed >= 0, r, "exams_failed", "must be non-negative");
  require(r.exams_absent >= 0, r, "exams_absent", "must be non-negative");
  require(r.max_reg_accum >= 0, r, "max_reg_accum", "must be non-negative");
  if (r.birth_date) {
    require(is_valid_date(*r.birth_date), r, "birth_date", "is not a valid date");
    require(days_from_epoch(*r.birth_date) < days_from_epoch(r.last_activity_date), r,
            "birth_date", "is not before last_activity_date");
  } else if (r.age_at_last_activity) {
    require(*r.age_at_last_activity >= 0.0, r, "age_at_last_activity", "must be non-negative");
  }
  // A completed degree with no recorded activity at all is a data defect.
  require(!(r.completed && r.exam_count == 0 && r.courses_taken_total == 0), r, "completed",
          "is set but the record shows no academic activity");
}

CohortLabel label_student(const StudentRecord& r, const StudyWindow& window) {
  validate_record(r);
  if (r.completed) {
    const int completion_year = r.last_activity_date.year;
    if (completion_year <= window.last_year) return CohortLabel::Graduated;
    return CohortLabel::Permanent;
  }
  return r.enrolled_2020 ? CohortLabel::Permanent : CohortLabel::Dropout;
}

std::vector<StudentRecord> apply_exclusions(const std::vector<StudentRecord>& cohort) {
  std::vector<StudentRecord> kept;
  kept.reserve(cohort.size());
  for (const auto& r : cohort) {
    if (!r.has_equivalencies) kept.push_back(r);
  }
  return kept;
}

FeatureVector extract_features(const StudentRecord& r, const StudyWindow& window) {
  validate_record(r);

  const auto tenure_days =
      days_from_epoch(r.last_activity_date) - days_from_epoch(r.entry_date);
  const double tenure_years = static_cast<double>(tenure_days) / 365.25;
  if (tenure_years < 0.0) {
    throw DataError("invalid record '" + r.id + "': computed tenure is negative");
  }

  double age = 0.0;
  if (r.birth_date) {
    age = static_cast<double>(whole_years_between(*r.birth_date, r.last_activity_date));
  } else if (r.age_at_last_activity) {
    age = *r.age_at_last_activity;
  } else {
    throw DataError("invalid record '" + r.id +
                    "': field EdadUltimaActividad has neither a birth date nor a supplied age");
  }

  const double grade_mean = r.exam_count > 0 ? r.grade_sum / r.exam_count : 0.0;

  FeatureVector v;
  v.values[0] = static_cast<double>(r.gender);
  v.values[1] = age;
  v.values[2] = tenure_years;
  v.values[3] = grade_mean;
  v.values[4] = static_cast<double>(r.courses_taken_total);
  v.values[5] = static_cast<double>(r.courses_regularised);
  v.values[6] = static_cast<double>(r.courses_retaken);
  v.values[7] = static_cast<double>(r.courses_libres);
  v.values[8] = static_cast<double>(r.exam_count);
  v.values[9] = static_cast<double>(r.courses_promoted);
  v.values[10] = static_cast<double>(r.courses_passed);
  v.values[11] = static_cast<double>(r.exams_failed);
  v.values[12] = static_cast<double>(r.exams_absent);
  v.values[13] = static_cast<double>(r.max_reg_accum);
  v.label = label_student(r, window) == CohortLabel::Dropout ? 1 : 0;
  return v;
}

}  // namespace retlab
