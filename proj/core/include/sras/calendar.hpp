#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace sras {

using Date = std::chrono::year_month_day;

/// Accepts "YYYY-MM-DD" and month-first "M/D/YYYY". Returns nullopt for
/// anything else, including impossible calendar dates.
std::optional<Date> parse_date(std::string_view text);

/// Always "YYYY-MM-DD".
std::string format_date(const Date& d);

Date add_days(const Date& d, int days);
int days_between(const Date& from, const Date& to);

/// ISO-8601 week number (1..53). Early-January dates can belong to week
/// 52/53 of the previous ISO year.
int iso_week(const Date& d);

/// Monday = 1 ... Sunday = 7.
int iso_weekday(const Date& d);

}  // namespace sras
