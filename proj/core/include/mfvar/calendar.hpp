#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace mfvar {

/// One week on the 48-week annual calendar (four weeks per month,
/// twelve months per year).
struct WeekStamp {
  int year = 0;
  int week = 0;  // 1..48

  int month() const { return (week + 3) / 4; }
  bool is_month_end() const { return week % 4 == 0; }
  bool valid() const { return week >= 1 && week <= 48; }

  auto operator<=>(const WeekStamp&) const = default;
};

std::string to_string(const WeekStamp& s);

/// Number of calendar steps from a to b (negative when b < a).
int weeks_between(const WeekStamp& a, const WeekStamp& b);

WeekStamp advance_weeks(WeekStamp s, int n);

/// Contiguous 48-per-year sequence inclusive of both endpoints.
std::vector<WeekStamp> build_calendar(WeekStamp start, WeekStamp end);

/// Proleptic Gregorian calendar date.
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  auto operator<=>(const Date&) const = default;
};

/// Parses "YYYY-MM-DD"; throws std::invalid_argument on malformed input.
Date parse_iso_date(std::string_view text);

/// Month m owns weeks 4(m-1)+1..4m; within a month days 1-7 map to the
/// first week, 8-14 to the second, 15-21 to the third, 22-31 to the fourth.
WeekStamp map_date_to_week(const Date& d);

std::vector<WeekStamp> map_dates_to_weeks(const std::vector<Date>& dates);

}  // namespace mfvar
