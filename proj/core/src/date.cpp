#include "retlab/date.hpp"

#include <charconv>
#include <chrono>

#include "retlab/errors.hpp"

namespace retlab {

namespace {

std::chrono::year_month_day to_ymd(const Date& d) {
  return std::chrono::year{d.year} / std::chrono::month{static_cast<unsigned>(d.month)} /
         std::chrono::day{static_cast<unsigned>(d.day)};
}

}  // namespace

bool is_valid_date(const Date& d) { return to_ymd(d).ok(); }

std::int64_t days_from_epoch(const Date& d) {
  const std::chrono::sys_days sd{to_ymd(d)};
  return sd.time_since_epoch().count();
}

Date parse_date(const std::string& iso) {
  auto field = [&](std::size_t pos, std::size_t len) {
    int value = 0;
    const char* first = iso.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) {
      throw DataError("malformed date '" + iso + "', expected YYYY-MM-DD");
    }
    return value;
  };
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
    throw DataError("malformed date '" + iso + "', expected YYYY-MM-DD");
  }
  const Date d{field(0, 4), field(5, 2), field(8, 2)};
  if (!is_valid_date(d)) throw DataError("invalid calendar date '" + iso + "'");
  return d;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

int whole_years_between(const Date& birth, const Date& at) {
  int years = at.year - birth.year;
  if (at.month < birth.month || (at.month == birth.month && at.day < birth.day)) --years;
  return years;
}

}  // namespace retlab
