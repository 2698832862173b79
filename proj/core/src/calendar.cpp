#include "mfvar/calendar.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace mfvar {

std::string to_string(const WeekStamp& s) {
  return std::to_string(s.year) + "w" + std::to_string(s.week);
}

int weeks_between(const WeekStamp& a, const WeekStamp& b) {
  return (b.year - a.year) * 48 + (b.week - a.week);
}

WeekStamp advance_weeks(WeekStamp s, int n) {
  int idx = (s.week - 1) + n;
  int ycarry = idx >= 0 ? idx / 48 : -((-idx + 47) / 48);
  return WeekStamp{s.year + ycarry, idx - 48 * ycarry + 1};
}

std::vector<WeekStamp> build_calendar(WeekStamp start, WeekStamp end) {
  if (!start.valid() || !end.valid())
    throw std::invalid_argument("build_calendar: week must lie in 1..48, got " +
                                to_string(start) + " .. " + to_string(end));
  if (end < start)
    throw std::invalid_argument("build_calendar: start " + to_string(start) +
                                " after end " + to_string(end));
  int n = weeks_between(start, end) + 1;
  std::vector<WeekStamp> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(advance_weeks(start, i));
  return out;
}

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static const int d[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return d[m - 1];
}

}  // namespace

Date parse_iso_date(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("parse_iso_date: expected YYYY-MM-DD, got '" +
                                std::string(text) + "'");
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') fail();
  Date d;
  auto parse_int = [&](std::string_view part, int& out) {
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc{} || p != part.data() + part.size()) fail();
  };
  parse_int(text.substr(0, 4), d.year);
  parse_int(text.substr(5, 2), d.month);
  parse_int(text.substr(8, 2), d.day);
  if (d.month < 1 || d.month > 12 || d.day < 1 ||
      d.day > days_in_month(d.year, d.month))
    fail();
  return d;
}

WeekStamp map_date_to_week(const Date& d) {
  int offset = std::min((d.day - 1) / 7 + 1, 4);  // 1..4 within the month
  return WeekStamp{d.year, 4 * (d.month - 1) + offset};
}

std::vector<WeekStamp> map_dates_to_weeks(const std::vector<Date>& dates) {
  std::vector<WeekStamp> out;
  out.reserve(dates.size());
  for (const auto& d : dates) out.push_back(map_date_to_week(d));
  return out;
}

}  // namespace mfvar
