#include "sras/features.hpp"

#include "sras/error.hpp"

namespace sras {

namespace {

struct Accumulator {
  std::array<double, 7> weekday_sum{};
  std::array<int, 7> weekday_n{};
  std::array<double, 12> month_sum{};
  std::array<int, 12> month_n{};
  double sum = 0.0;
  int n = 0;

  void add(const Date& d, double s) {
    const auto wd = static_cast<std::size_t>(iso_weekday(d) - 1);
    const auto mo = static_cast<std::size_t>(static_cast<unsigned>(d.month()) - 1);
    weekday_sum[wd] += s;
    ++weekday_n[wd];
    month_sum[mo] += s;
    ++month_n[mo];
    sum += s;
    ++n;
  }

  GroupAverages finish() const {
    GroupAverages g;
    g.overall = n > 0 ? sum / n : 0.0;
    for (std::size_t k = 0; k < 7; ++k) g.by_weekday[k] = weekday_n[k] > 0 ? weekday_sum[k] / weekday_n[k] : g.overall;
    for (std::size_t k = 0; k < 12; ++k) g.by_month[k] = month_n[k] > 0 ? month_sum[k] / month_n[k] : g.overall;
    return g;
  }
};

}  // namespace

GroupAverages series_averages(const Date& start, std::span<const double> sales) {
  Accumulator a;
  for (std::size_t i = 0; i < sales.size(); ++i) a.add(add_days(start, static_cast<int>(i)), sales[i]);
  return a.finish();
}

std::map<SeriesKey, GroupAverages> compute_averages(std::span<const SalesRecord> records, std::optional<Date> cutoff) {
  std::map<SeriesKey, Accumulator> acc;
  for (const auto& r : records) {
    auto& a = acc[{r.store, r.item}];
    if (cutoff && std::chrono::sys_days{r.date} > std::chrono::sys_days{*cutoff}) continue;
    a.add(r.date, static_cast<double>(r.sales));
  }
  std::map<SeriesKey, GroupAverages> out;
  for (const auto& [key, a] : acc) out.emplace(key, a.finish());
  return out;
}

FeatureRow make_feature_row(const Date& date, int store, int item, double sales, const GroupAverages& averages) {
  FeatureRow row;
  row.date = date;
  row.store = store;
  row.item = item;
  row.sales = sales;
  row.month = static_cast<int>(static_cast<unsigned>(date.month()));
  row.week = iso_week(date);
  row.day = static_cast<int>(static_cast<unsigned>(date.day()));
  row.daily_avg_sales = averages.daily(date);
  row.monthly_avg_sales = averages.monthly(date);
  return row;
}

std::vector<FeatureRow> engineer_features(std::span<const SalesRecord> records, std::optional<Date> train_cutoff) {
  if (records.empty()) throw Error(ErrorCode::InsufficientData, "no sales records");
  const auto averages = compute_averages(records, train_cutoff);
  std::vector<FeatureRow> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    rows.push_back(make_feature_row(r.date, r.store, r.item, static_cast<double>(r.sales), averages.at({r.store, r.item})));
  }
  return rows;
}

}  // namespace sras
