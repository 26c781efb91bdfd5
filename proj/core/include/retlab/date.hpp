#pragma once

#include <cstdint>
#include <string>

namespace retlab {

// Calendar date, proleptic Gregorian.
struct Date {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  bool operator==(const Date&) const = default;
};

bool is_valid_date(const Date& d);

// Days since 1970-01-01; negative before the epoch.
std::int64_t days_from_epoch(const Date& d);

// "YYYY-MM-DD". Throws DataError on malformed input.
Date parse_date(const std::string& iso);
std::string format_date(const Date& d);

// Completed years from `birth` to `at` (birthday arithmetic).
int whole_years_between(const Date& birth, const Date& at);

}  // namespace retlab
