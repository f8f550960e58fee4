#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "sras/analytics.hpp"
#include "sras/error.hpp"

namespace sras {
namespace {

// Box whose foot-point is (x, y).
TrackRecord at_foot(int frame, int id, double x, double y) { return {frame, id, {x - 5, y - 20, 10, 20}, 0.9}; }

TEST(HeatMap, SingleRecordBinning) {
  const std::vector<TrackRecord> recs{at_foot(1, 1, 50, 95)};
  const auto h = accumulate_heatmap(recs, 10, 10, 100, 100);
  EXPECT_EQ(h.at(5, 9), 1u);
  EXPECT_EQ(h.total(), 1u);
}

TEST(HeatMap, StationaryTrackAccumulates) {
  std::vector<TrackRecord> recs;
  for (int f = 1; f <= 17; ++f) recs.push_back(at_foot(f, 3, 12, 34));
  const auto h = accumulate_heatmap(recs, 10, 10, 100, 100);
  EXPECT_EQ(h.at(1, 3), 17u);
  EXPECT_EQ(h.total(), 17u);
}

TEST(HeatMap, EdgeAndOutsidePointsClamp) {
  HeatMap h(10, 10, 100, 100);
  h.add({100, 100});
  h.add({-5, 250});
  EXPECT_EQ(h.at(9, 9), 1u);
  EXPECT_EQ(h.at(0, 9), 1u);
}

TEST(HeatMap, MassEqualsRecordCount) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> x(-50, 1970), y(-50, 1130);
  std::vector<TrackRecord> recs;
  for (int i = 0; i < 5000; ++i) recs.push_back(at_foot(i / 7 + 1, i % 7 + 1, x(rng), y(rng)));
  for (auto [c, r] : {std::pair{1, 1}, std::pair{10, 10}, std::pair{64, 48}}) {
    EXPECT_EQ(accumulate_heatmap(recs, c, r, 1920, 1080).total(), recs.size());
  }
}

TEST(HeatMap, NormalizedSumsToOne) {
  HeatMap h(4, 3, 40, 30);
  h.add({1, 1});
  h.add({39, 29});
  h.add({39, 29});
  const auto n = h.normalized();
  double s = 0.0;
  for (double v : n) s += v;
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_NEAR(n[2 * 4 + 3], 2.0 / 3.0, 1e-12);
  EXPECT_THROW(HeatMap(2, 2, 10, 10).normalized(), Error);
}

TEST(HeatMap, PgmFormat) {
  HeatMap h(3, 2, 30, 20);
  h.add({5, 5});
  h.add({25, 15});
  h.add({25, 15});
  std::ostringstream out;
  h.write_pgm(out);
  std::istringstream in(out.str());
  std::string magic;
  int w, ht, maxv;
  in >> magic >> w >> ht >> maxv;
  EXPECT_EQ(magic, "P2");
  EXPECT_EQ(w, 3);
  EXPECT_EQ(ht, 2);
  EXPECT_EQ(maxv, 255);
  std::vector<int> px(6);
  for (int& p : px) in >> p;
  EXPECT_EQ(px, (std::vector<int>{128, 0, 0, 0, 0, 255}));
}

TEST(HeatMap, CsvFormat) {
  HeatMap h(2, 2, 10, 10);
  h.add({1, 1});
  h.add({9, 9});
  h.add({9, 9});
  std::ostringstream out;
  h.write_csv(out);
  EXPECT_EQ(out.str(), "1,0\n0,2\n");
}

TEST(HeatMap, InvalidConstruction) {
  EXPECT_THROW(HeatMap(0, 1, 10, 10), Error);
  EXPECT_THROW(HeatMap(1, 1, 0, 10), Error);
}

const CountingLine kVertical{{50, 0}, {50, 100}, "door"};

std::vector<TrackRecord> walk(int id, const std::vector<double>& xs, int first_frame = 1) {
  std::vector<TrackRecord> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(at_foot(first_frame + static_cast<int>(i), id, xs[i], 50));
  return out;
}

TEST(Counting, SingleCrossing) {
  const auto recs = walk(1, {10, 30, 50, 70, 90});
  const auto rep = count_line_crossings(recs, kVertical);
  EXPECT_EQ(rep.positive_crossings + rep.negative_crossings, 1);
  ASSERT_EQ(rep.events.size(), 1u);
  EXPECT_EQ(rep.events[0].frame, 4);  // the on-line frame keeps the old side
  EXPECT_EQ(rep.label, "door");
}

TEST(Counting, OutAndBack) {
  const auto recs = walk(1, {10, 90, 10});
  const auto rep = count_line_crossings(recs, kVertical);
  EXPECT_EQ(rep.positive_crossings, 1);
  EXPECT_EQ(rep.negative_crossings, 1);
}

TEST(Counting, OneSideNeverCounts) {
  const auto rep = count_line_crossings(walk(1, {10, 20, 30, 49}), kVertical);
  EXPECT_EQ(rep.positive_crossings, 0);
  EXPECT_EQ(rep.negative_crossings, 0);
}

TEST(Counting, ReversalSwapsCounts) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> x(0, 100);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> xs(30);
    for (double& v : xs) v = x(rng);
    std::vector<double> rev(xs.rbegin(), xs.rend());
    const auto a = count_line_crossings(walk(1, xs), kVertical);
    const auto b = count_line_crossings(walk(1, rev), kVertical);
    EXPECT_EQ(a.positive_crossings, b.negative_crossings);
    EXPECT_EQ(a.negative_crossings, b.positive_crossings);
  }
}

TEST(Counting, FlippedLineSwapsCounts) {
  const auto recs = walk(1, {10, 90, 10, 90});
  const auto a = count_line_crossings(recs, kVertical);
  const auto b = count_line_crossings(recs, {kVertical.p2, kVertical.p1, "door"});
  EXPECT_EQ(a.positive_crossings, b.negative_crossings);
  EXPECT_EQ(a.negative_crossings, b.positive_crossings);
}

TEST(Counting, RelabelInvariance) {
  auto recs = walk(1, {10, 90, 10});
  const auto more = walk(2, {90, 10, 90, 10});
  recs.insert(recs.end(), more.begin(), more.end());
  auto relabeled = recs;
  for (auto& r : relabeled) r.track_id = r.track_id == 1 ? 40 : 7;
  const auto a = count_line_crossings(recs, kVertical);
  const auto b = count_line_crossings(relabeled, kVertical);
  EXPECT_EQ(a.positive_crossings, b.positive_crossings);
  EXPECT_EQ(a.negative_crossings, b.negative_crossings);
  EXPECT_EQ(a.events.size(), 5u);
}

TEST(Counting, Errors) {
  auto recs = walk(1, {10, 90});
  std::swap(recs[0].frame, recs[1].frame);
  try {
    count_line_crossings(recs, kVertical);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsortedRecords);
  }
  EXPECT_THROW(count_line_crossings(walk(1, {1}), CountingLine{{1, 1}, {1, 1}, ""}), Error);
}

TEST(Counting, JsonShape) {
  const auto rep = count_line_crossings(walk(4, {10, 90}), kVertical);
  const nlohmann::json j = rep;
  EXPECT_EQ(j.at("label"), "door");
  ASSERT_EQ(j.at("events").size(), 1u);
  EXPECT_EQ(j.at("events")[0].at("track"), 4);
}

TEST(Visitors, Basics) {
  EXPECT_EQ(unique_visitors({}), 0u);
  const std::vector<TrackRecord> recs{at_foot(1, 1, 0, 0), at_foot(2, 1, 0, 0), at_foot(2, 2, 0, 0)};
  EXPECT_EQ(unique_visitors(recs), 2u);
}

TEST(Visitors, MatchesSetOracle) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> id(1, 3000);
  std::vector<TrackRecord> recs;
  std::set<int> oracle;
  for (int i = 0; i < 10000; ++i) {
    recs.push_back(at_foot(i + 1, id(rng), 5, 5));
    oracle.insert(recs.back().track_id);
  }
  EXPECT_EQ(unique_visitors(recs), oracle.size());
}

}  // namespace
}  // namespace sras
