#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "retlab/cohort_csv.hpp"
#include "retlab/errors.hpp"
#include "retlab/io.hpp"
#include "retlab/records.hpp"
#include "retlab/synth.hpp"

using namespace retlab;

namespace {

StudentRecord typical_record() {
  StudentRecord r;
  r.id = "s1";
  r.gender = 1;
  r.entry_date = {2010, 3, 1};
  r.last_activity_date = {2013, 3, 1};
  r.age_at_last_activity = 22.0;
  r.grade_sum = 28.0;
  r.exam_count = 4;
  r.courses_taken_total = 12;
  r.courses_regularised = 8;
  r.courses_retaken = 2;
  r.courses_libres = 1;
  r.courses_promoted = 3;
  r.courses_passed = 6;
  r.exams_failed = 1;
  r.exams_absent = 0;
  r.max_reg_accum = 5;
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("dates parse, format and count years") {
  const Date d = parse_date("2013-03-01");
  CHECK(d == Date{2013, 3, 1});
  CHECK(format_date(d) == "2013-03-01");
  CHECK_THROWS_AS(parse_date("2013-13-01"), DataError);
  CHECK_THROWS_AS(parse_date("2013/03/01"), DataError);
  CHECK_THROWS_AS(parse_date("201-03-01"), DataError);

  CHECK(days_from_epoch({1970, 1, 1}) == 0);
  CHECK(days_from_epoch({1970, 1, 2}) == 1);

  CHECK(whole_years_between({1990, 3, 1}, {2013, 3, 1}) == 23);
  CHECK(whole_years_between({1990, 3, 2}, {2013, 3, 1}) == 22);
  CHECK(whole_years_between({1992, 2, 29}, {2013, 2, 28}) == 20);
}

TEST_CASE("labeling follows completion and enrollment") {
  StudentRecord r = typical_record();

  r.completed = true;
  r.last_activity_date = {2012, 11, 20};
  CHECK(label_student(r) == CohortLabel::Graduated);

  r.completed = false;
  r.enrolled_2020 = true;
  CHECK(label_student(r) == CohortLabel::Permanent);

  r.enrolled_2020 = false;
  CHECK(label_student(r) == CohortLabel::Dropout);
}

TEST_CASE("labeling is total: completion after the window counts as enrolled") {
  StudentRecord r = typical_record();
  r.completed = true;
  r.last_activity_date = {2021, 3, 1};
  CHECK(label_student(r) == CohortLabel::Permanent);
}

TEST_CASE("record validation names the broken field") {
  StudentRecord r = typical_record();
  CHECK_NOTHROW(validate_record(r));

  SUBCASE("activity before entry") {
    r.last_activity_date = {2009, 1, 1};
    CHECK_THROWS_WITH_AS(validate_record(r),
                         doctest::Contains("last_activity_date"), DataError);
  }
  SUBCASE("negative count") {
    r.exams_failed = -1;
    CHECK_THROWS_WITH_AS(validate_record(r), doctest::Contains("exams_failed"),
                         DataError);
  }
  SUBCASE("gender outside {0,1}") {
    r.gender = 2;
    CHECK_THROWS_WITH_AS(validate_record(r), doctest::Contains("gender"), DataError);
  }
  SUBCASE("completed degree with no recorded activity") {
    r.completed = true;
    r.exam_count = 0;
    r.grade_sum = 0.0;
    r.courses_taken_total = 0;
    CHECK_THROWS_WITH_AS(validate_record(r), doctest::Contains("completed"), DataError);
  }
}

TEST_CASE("exclusions drop equivalency records and keep order") {
  CHECK(apply_exclusions({}).empty());

  StudentRecord keep = typical_record();
  StudentRecord drop = typical_record();
  drop.has_equivalencies = true;
  CHECK(apply_exclusions({drop}).empty());

  std::vector<StudentRecord> cohort;
  for (int i = 0; i < 1615; ++i) {
    StudentRecord r = typical_record();
    r.id = "s" + std::to_string(i);
    r.has_equivalencies = i % 2 == 0 && i < 544;  // 272 of 1615
    cohort.push_back(r);
  }
  const auto kept = apply_exclusions(cohort);
  const long excluded =
      std::count_if(cohort.begin(), cohort.end(),
                    [](const StudentRecord& r) { return r.has_equivalencies; });
  CHECK(excluded == 272);
  CHECK(kept.size() == 1343);
  for (std::size_t i = 1; i < kept.size(); ++i) {
    CHECK(std::stoi(kept[i - 1].id.substr(1)) < std::stoi(kept[i].id.substr(1)));
  }
  CHECK(apply_exclusions(kept).size() == kept.size());
}

TEST_CASE("feature extraction derives tenure, age, and grade average") {
  StudentRecord r = typical_record();
  const FeatureVector v = extract_features(r);

  CHECK(v.values[feature_index("TiempoFacultad")] ==
        doctest::Approx(3.0).epsilon(0.01));
  CHECK(v.values[feature_index("PromedioNotas")] == doctest::Approx(7.0));
  CHECK(v.values[feature_index("EdadUltimaActividad")] == doctest::Approx(22.0));
  CHECK(v.values[feature_index("Genero")] == 1.0);
  CHECK(v.values[feature_index("NumeroTotalCursadas")] == 12.0);
  CHECK(v.values[feature_index("NumeroRegulares")] == 8.0);
  CHECK(v.values[feature_index("NumeroRecursadas")] == 2.0);
  CHECK(v.values[feature_index("NumeroLibres")] == 1.0);
  CHECK(v.values[feature_index("NumerodeExamenes")] == 4.0);
  CHECK(v.values[feature_index("NumeroPromociones")] == 3.0);
  CHECK(v.values[feature_index("NumeroAprobados")] == 6.0);
  CHECK(v.values[feature_index("NumerodeReprobados")] == 1.0);
  CHECK(v.values[feature_index("NumerodeAusentes")] == 0.0);
  CHECK(v.values[feature_index("MaxRegAcum")] == 5.0);
  CHECK(v.label == 1);  // not completed, not enrolled in 2020

  SUBCASE("zero exams means grade average 0") {
    r.exam_count = 0;
    r.grade_sum = 0.0;
    CHECK(extract_features(r).values[feature_index("PromedioNotas")] == 0.0);
  }
  SUBCASE("birth date wins over the supplied age") {
    r.birth_date = Date{1991, 5, 10};
    CHECK(extract_features(r).values[feature_index("EdadUltimaActividad")] == 21.0);
  }
  SUBCASE("non-dropout labels map to 0") {
    r.enrolled_2020 = true;
    CHECK(extract_features(r).label == 0);
  }
}

TEST_CASE("cohort CSV round-trips and reports bad rows") {
  const std::string path = temp_path("retlab_records_roundtrip.csv");

  SynthConfig cfg;
  cfg.n_students = 50;
  cfg.seed = 11;
  const Cohort cohort = synth_cohort(cfg);
  save_cohort_csv(path, cohort);

  const LoadedCohort loaded = load_cohort_csv(path);
  CHECK(loaded.report.rows_read == 50);
  CHECK(loaded.report.rows_rejected == 0);
  REQUIRE(loaded.rows.size() == cohort.size());
  for (std::size_t i = 0; i < cohort.size(); ++i) CHECK(loaded.rows[i] == cohort[i]);
  std::filesystem::remove(path);
}

TEST_CASE("cohort CSV header errors name the column") {
  const std::string path = temp_path("retlab_records_header.csv");
  std::string header;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    header += std::string(kFeatureNames[f]) + ",";
  }
  header += "Abandono";

  SUBCASE("header-only file loads as empty") {
    atomic_write_file(path, header + "\n");
    const LoadedCohort loaded = load_cohort_csv(path);
    CHECK(loaded.rows.empty());
    CHECK(loaded.report.rows_read == 0);
  }
  SUBCASE("three well-formed rows keep file order") {
    std::string text = header + "\n";
    for (int i = 0; i < 3; ++i) {
      text += std::to_string(i + 10);
      for (int c = 1; c < 14; ++c) text += ",1";
      text += ",0\n";
    }
    atomic_write_file(path, text);
    const LoadedCohort loaded = load_cohort_csv(path);
    REQUIRE(loaded.rows.size() == 3);
    CHECK(loaded.rows[0].values[0] == 10.0);
    CHECK(loaded.rows[1].values[0] == 11.0);
    CHECK(loaded.rows[2].values[0] == 12.0);
  }
  SUBCASE("missing column is a schema error naming it") {
    const std::string broken = "Genero,EdadUltimaActividad,Abandono\n0,20,1\n";
    atomic_write_file(path, broken);
    CHECK_THROWS_WITH_AS(load_cohort_csv(path), doctest::Contains("TiempoFacultad"),
                         DataError);
  }
  SUBCASE("specifically a missing NumeroPromociones is named") {
    std::string partial;
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      if (kFeatureNames[f] == "NumeroPromociones") continue;
      partial += std::string(kFeatureNames[f]) + ",";
    }
    partial += "Abandono\n";
    atomic_write_file(path, partial);
    CHECK_THROWS_WITH_AS(load_cohort_csv(path), doctest::Contains("NumeroPromociones"),
                         DataError);
  }
  SUBCASE("unknown column is rejected") {
    atomic_write_file(path, header + ",Extra\n");
    CHECK_THROWS_WITH_AS(load_cohort_csv(path), doctest::Contains("Extra"), DataError);
  }
  SUBCASE("non-numeric cell rejects the row with its line number") {
    std::string text = header + "\n1,20,3,7,12,8,2,1,4,3,6,1,0,5,1\n";
    text += "1,oops,3,7,12,8,2,1,4,3,6,1,0,5,1\n";
    text += "0,21,3,7,12,8,2,1,4,3,6,1,0,5,0\n";
    atomic_write_file(path, text);
    const LoadedCohort loaded = load_cohort_csv(path);
    CHECK(loaded.rows.size() == 2);
    CHECK(loaded.report.rows_rejected == 1);
    REQUIRE(loaded.report.row_errors.size() == 1);
    CHECK(loaded.report.row_errors[0].line == 3);
  }
  std::filesystem::remove(path);
}

TEST_CASE("synthetic cohorts are validated, calibrated and reproducible") {
  SynthConfig bad;
  bad.n_students = 0;
  CHECK_THROWS_AS(synth_cohort(bad), ConfigError);
  bad.n_students = 10;
  bad.dropout_base_rate = 1.0;
  CHECK_THROWS_AS(synth_cohort(bad), ConfigError);
  bad.dropout_base_rate = 0.5;
  bad.noise_scale = -0.1;
  CHECK_THROWS_AS(synth_cohort(bad), ConfigError);

  SynthConfig cfg;
  cfg.n_students = 2000;
  cfg.seed = 7;
  const Cohort a = synth_cohort(cfg);
  const Cohort b = synth_cohort(cfg);
  REQUIRE(a.size() == 2000);
  CHECK(a == b);
  CHECK(cohort_to_csv(a) == cohort_to_csv(b));

  double rate = 0.0;
  for (const FeatureVector& row : a) rate += row.label;
  rate /= static_cast<double>(a.size());
  CHECK(rate >= 0.45);
  CHECK(rate <= 0.55);

  // different seed, different cohort
  cfg.seed = 8;
  CHECK(synth_cohort(cfg) != a);

  // base-rate sweep stays calibrated
  cfg.seed = 7;
  cfg.dropout_base_rate = 0.3;
  double low_rate = 0.0;
  for (const FeatureVector& row : synth_cohort(cfg)) low_rate += row.label;
  low_rate /= 2000.0;
  CHECK(low_rate >= 0.25);
  CHECK(low_rate <= 0.35);
}

TEST_CASE("generator signal: regularised courses lower the dropout rate") {
  SynthConfig cfg;
  cfg.n_students = 2000;
  cfg.seed = 7;
  const Cohort cohort = synth_cohort(cfg);
  const std::size_t reg = feature_index("NumeroRegulares");
  const std::size_t tenure = feature_index("TiempoFacultad");

  // Raw regularised counts scale with tenure, and tenure itself drives risk,
  // so the generator's regularised signal only shows once tenure is held
  // roughly fixed: within each tenure band, the regulares-rich half of the
  // students must drop out less often than the regulares-poor half.
  const double edges[] = {0.0, 3.0, 6.0, 12.0};
  for (int band = 0; band < 3; ++band) {
    CAPTURE(band);
    std::vector<const FeatureVector*> rows;
    for (const FeatureVector& row : cohort) {
      if (row.values[tenure] >= edges[band] && row.values[tenure] < edges[band + 1]) {
        rows.push_back(&row);
      }
    }
    REQUIRE(rows.size() > 100);
    std::sort(rows.begin(), rows.end(), [&](const FeatureVector* a, const FeatureVector* b) {
      return a->values[reg] < b->values[reg];
    });
    const std::size_t half = rows.size() / 2;
    double poor = 0.0, rich = 0.0;
    for (std::size_t i = 0; i < half; ++i) poor += rows[i]->label;
    for (std::size_t i = rows.size() - half; i < rows.size(); ++i) rich += rows[i]->label;
    CHECK(rich / half < poor / half);
  }
}

TEST_CASE("feature names resolve to schema indices") {
  CHECK(feature_index("Genero") == 0);
  CHECK(feature_index("MaxRegAcum") == 13);
  CHECK(feature_index("NoSuchColumn") == kNumFeatures);
  CHECK(kLabelName == "Abandono");
}
