#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sras/calendar.hpp"
#include "sras/io.hpp"

namespace sras {

struct FeatureRow {
  Date date;
  int store = 0;
  int item = 0;
  double sales = 0.0;
  int month = 1;  // 1..12
  int week = 1;   // ISO week 1..53
  int day = 1;    // day of month
  double daily_avg_sales = 0.0;    // mean over the (store, item, weekday) group
  double monthly_avg_sales = 0.0;  // mean over the (store, item, month) group
};

/// Seasonal means of one (store, item) series. Groups without observations
/// fall back to the overall mean.
struct GroupAverages {
  std::array<double, 7> by_weekday{};  // index = ISO weekday - 1
  std::array<double, 12> by_month{};   // index = month - 1
  double overall = 0.0;

  double daily(const Date& d) const { return by_weekday[static_cast<std::size_t>(iso_weekday(d) - 1)]; }
  double monthly(const Date& d) const { return by_month[static_cast<unsigned>(d.month()) - 1]; }
};

using SeriesKey = std::pair<int, int>;  // (store, item)

/// Averages over records dated on or before `cutoff` (all records when empty).
std::map<SeriesKey, GroupAverages> compute_averages(std::span<const SalesRecord> records,
                                                    std::optional<Date> cutoff = std::nullopt);

/// Averages of one contiguous daily series starting at `start`.
GroupAverages series_averages(const Date& start, std::span<const double> sales);

FeatureRow make_feature_row(const Date& date, int store, int item, double sales, const GroupAverages& averages);

/// Calendar columns plus seasonal means. Averages use only records up to
/// `train_cutoff` and are joined onto later rows, so validation targets never
/// leak into their own features.
std::vector<FeatureRow> engineer_features(std::span<const SalesRecord> records,
                                          std::optional<Date> train_cutoff = std::nullopt);

}  // namespace sras
