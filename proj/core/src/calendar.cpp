#include "sras/calendar.hpp"

#include <charconv>
#include <cstdio>

namespace sras {

namespace {

using namespace std::chrono;

bool parse_uint(std::string_view s, int& out) {
  if (s.empty() || s.size() > 4) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && out >= 0;
}

std::optional<Date> make(int y, int m, int d) {
  Date date{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (auto dash = text.find('-'); dash != std::string_view::npos) {
    auto dash2 = text.find('-', dash + 1);
    if (dash != 4 || dash2 == std::string_view::npos) return std::nullopt;
    if (!parse_uint(text.substr(0, dash), y) || !parse_uint(text.substr(dash + 1, dash2 - dash - 1), m) ||
        !parse_uint(text.substr(dash2 + 1), d)) {
      return std::nullopt;
    }
    return make(y, m, d);
  }
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto slash2 = text.find('/', slash + 1);
  if (slash2 == std::string_view::npos) return std::nullopt;
  if (!parse_uint(text.substr(0, slash), m) || !parse_uint(text.substr(slash + 1, slash2 - slash - 1), d) ||
      !parse_uint(text.substr(slash2 + 1), y) || text.size() - slash2 - 1 != 4) {
    return std::nullopt;
  }
  return make(y, m, d);
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

Date add_days(const Date& d, int days) { return Date{sys_days{d} + std::chrono::days{days}}; }

int days_between(const Date& from, const Date& to) {
  return static_cast<int>((sys_days{to} - sys_days{from}).count());
}

int iso_weekday(const Date& d) { return static_cast<int>(weekday{sys_days{d}}.iso_encoding()); }

int iso_week(const Date& d) {
  // The ISO week containing d is the one containing its Thursday.
  const sys_days day_point{d};
  const sys_days thursday = day_point + std::chrono::days{4 - iso_weekday(d)};
  const year_month_day thursday_date{thursday};
  const sys_days jan1{thursday_date.year() / January / 1};
  return static_cast<int>((thursday - jan1).count()) / 7 + 1;
}

}  // namespace sras
