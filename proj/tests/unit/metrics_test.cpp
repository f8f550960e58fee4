#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "sras/error.hpp"
#include "sras/metrics.hpp"

namespace sras {
namespace {

GroundTruthEntry gt(int frame, int id, BBox b) { return {frame, id, b, true}; }

TEST(MatchDetections, Rules) {
  const std::vector<GroundTruthEntry> gts{gt(1, 1, {0, 0, 10, 10})};
  {
    const std::vector<Detection> dets{{1, {0, 0, 10, 10}, 0.9}};
    const auto m = match_detections(dets, gts, 0.5);
    ASSERT_EQ(m.labeled.size(), 1u);
    EXPECT_TRUE(m.labeled[0].true_positive);
    EXPECT_EQ(m.false_negatives, 0u);
  }
  {
    const std::vector<Detection> dets{{1, {50, 50, 10, 10}, 0.9}};
    const auto m = match_detections(dets, gts, 0.5);
    EXPECT_FALSE(m.labeled[0].true_positive);
    EXPECT_EQ(m.false_negatives, 1u);
  }
  {
    const std::vector<Detection> dets{{1, {0, 0, 10, 10}, 0.4}, {1, {1, 0, 10, 10}, 0.8}};
    const auto m = match_detections(dets, gts, 0.5);
    ASSERT_EQ(m.labeled.size(), 2u);
    EXPECT_EQ(m.labeled[0].score, 0.8);
    EXPECT_TRUE(m.labeled[0].true_positive);
    EXPECT_FALSE(m.labeled[1].true_positive);
  }
  {
    // Detections never match GT of another frame; inactive GT is ignored.
    const std::vector<GroundTruthEntry> mixed{gt(2, 1, {0, 0, 10, 10}), {1, 2, {0, 0, 10, 10}, false}};
    const std::vector<Detection> dets{{1, {0, 0, 10, 10}, 0.9}};
    const auto m = match_detections(dets, mixed, 0.5);
    EXPECT_FALSE(m.labeled[0].true_positive);
    EXPECT_EQ(m.total_gt, 1u);
  }
}

TEST(AveragePrecision, TrivialCases) {
  const std::vector<LabeledDetection> perfect{{0.9, true}, {0.8, true}};
  EXPECT_DOUBLE_EQ(average_precision(perfect, 2), 1.0);
  const std::vector<LabeledDetection> wrong{{0.9, false}, {0.8, false}};
  EXPECT_DOUBLE_EQ(average_precision(wrong, 2), 0.0);
  EXPECT_DOUBLE_EQ(average_precision({}, 3), 0.0);
  try {
    average_precision(perfect, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoGroundTruth);
  }
}

TEST(AveragePrecision, HandExample) {
  // Cutoffs: .9 -> (r .5, p 1); .8 -> (.5, .5); .7 -> (1, 2/3). Envelope area .5*1 + .5*2/3.
  const std::vector<LabeledDetection> l{{0.9, true}, {0.8, false}, {0.7, true}};
  EXPECT_NEAR(average_precision(l, 2), 0.5 + 0.5 * 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(average_precision(l, 2), testing::sweep_average_precision({0.9, 0.8, 0.7}, {true, false, true}, 2), 1e-12);
}

TEST(AveragePrecision, MatchesSweepOracle) {
  std::mt19937_64 rng(500);
  std::uniform_int_distribution<int> count(0, 20), level(1, 8);
  std::bernoulli_distribution coin(0.5);
  for (int k = 0; k < 500; ++k) {
    const int n = count(rng);
    std::vector<double> scores;
    std::vector<bool> tp;
    std::vector<LabeledDetection> labeled;
    std::size_t hits = 0;
    for (int i = 0; i < n; ++i) {
      scores.push_back(level(rng) / 8.0);  // coarse levels force ties
      tp.push_back(coin(rng));
      hits += tp.back() ? 1 : 0;
    }
    std::vector<std::size_t> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
    for (auto i : order) labeled.push_back({scores[i], tp[i]});
    const std::size_t total = hits + std::uniform_int_distribution<std::size_t>(hits ? 0 : 1, 3)(rng);
    ASSERT_NEAR(average_precision(labeled, total), testing::sweep_average_precision(scores, tp, total), 1e-12) << k;
  }
}

TEST(MapSuite, Perfect) {
  std::vector<GroundTruthEntry> gts;
  std::vector<Detection> dets;
  for (int f = 1; f <= 5; ++f) {
    gts.push_back(gt(f, 1, {10.0 * f, 0, 20, 40}));
    dets.push_back({f, {10.0 * f, 0, 20, 40}, 0.5 + 0.1 * f});
  }
  const auto r = map_suite(dets, gts);
  EXPECT_DOUBLE_EQ(r.ap50, 1.0);
  EXPECT_DOUBLE_EQ(r.map50_95, 1.0);
  EXPECT_EQ(r.curves.size(), 10u);
}

TEST(MapSuite, IouPointSixFixture) {
  std::vector<GroundTruthEntry> gts;
  std::vector<Detection> dets;
  for (int f = 1; f <= 4; ++f) {
    gts.push_back(gt(f, 1, {0, 0, 10, 10}));
    dets.push_back({f, {0, 0, 10, 6}, 0.9});
  }
  const auto r = map_suite(dets, gts);
  EXPECT_DOUBLE_EQ(r.ap50, 1.0);
  EXPECT_DOUBLE_EQ(r.map50, 1.0);
  EXPECT_DOUBLE_EQ(r.map50_95, 0.3);
  EXPECT_DOUBLE_EQ(r.curves[2].ap, 1.0);
  EXPECT_DOUBLE_EQ(r.curves[3].ap, 0.0);
}

TEST(MapSuite, EmptyDetectionsAndNoGt) {
  const std::vector<GroundTruthEntry> gts{gt(1, 1, {0, 0, 10, 10})};
  const auto r = map_suite({}, gts);
  EXPECT_EQ(r.ap50, 0.0);
  EXPECT_EQ(r.map50_95, 0.0);
  EXPECT_THROW(map_suite({}, {}), Error);
}

// Two objects, ten frames; the tracker swaps their ids from frame 6 on.
struct SwapFixture {
  std::vector<GroundTruthEntry> gts;
  std::vector<TrackRecord> tracks;
};

SwapFixture swap_fixture(bool swap) {
  SwapFixture fx;
  for (int f = 1; f <= 10; ++f) {
    const BBox a{10.0 + f, 10, 20, 40}, b{200.0 - f, 10, 20, 40};
    fx.gts.push_back(gt(f, 1, a));
    fx.gts.push_back(gt(f, 2, b));
    const bool swapped = swap && f >= 6;
    fx.tracks.push_back({f, swapped ? 8 : 5, a, 0.9});
    fx.tracks.push_back({f, swapped ? 5 : 8, b, 0.9});
  }
  return fx;
}

TEST(Mota, PerfectAndEmpty) {
  const auto fx = swap_fixture(false);
  const auto r = evaluate_mota(fx.gts, fx.tracks);
  EXPECT_DOUBLE_EQ(r.mota, 1.0);
  EXPECT_EQ(r.false_positives + r.false_negatives + r.id_switches, 0u);
  EXPECT_EQ(r.gt_total, 20u);

  const auto none = evaluate_mota(fx.gts, {});
  EXPECT_EQ(none.false_positives, 0u);
  EXPECT_EQ(none.false_negatives, 20u);
  EXPECT_DOUBLE_EQ(none.mota, 0.0);
  EXPECT_THROW(evaluate_mota({}, fx.tracks), Error);
}

TEST(Mota, SwapCountsTwoSwitches) {
  const auto fx = swap_fixture(true);
  const auto r = evaluate_mota(fx.gts, fx.tracks);
  EXPECT_EQ(r.id_switches, 2u);
  EXPECT_DOUBLE_EQ(r.mota, 1.0 - 2.0 / 20.0);
}

TEST(Mota, TrackRelabelInvariance) {
  auto fx = swap_fixture(true);
  const auto a = evaluate_mota(fx.gts, fx.tracks);
  for (auto& t : fx.tracks) t.track_id = t.track_id * 13 + 2;
  const auto b = evaluate_mota(fx.gts, fx.tracks);
  EXPECT_EQ(a.id_switches, b.id_switches);
  EXPECT_EQ(a.mota, b.mota);
}

TEST(Mota, GapDoesNotCountAsSwitch) {
  auto fx = swap_fixture(false);
  std::erase_if(fx.tracks, [](const TrackRecord& t) { return t.track_id == 5 && (t.frame == 4 || t.frame == 5); });
  const auto r = evaluate_mota(fx.gts, fx.tracks);
  EXPECT_EQ(r.false_negatives, 2u);
  EXPECT_EQ(r.id_switches, 0u);
}

TEST(ForecastMetrics, PerfectFit) {
  const std::vector<double> y{3, 5, 8, 2};
  const auto r = forecast_metrics(y, y);
  EXPECT_EQ(r.mse, 0.0);
  EXPECT_EQ(r.rmse, 0.0);
  EXPECT_EQ(r.mae, 0.0);
  EXPECT_EQ(r.mape, 0.0);
  EXPECT_EQ(r.r2, 1.0);
}

TEST(ForecastMetrics, HandValues) {
  const std::vector<double> actual{2, 4, 6, 8};
  const std::vector<double> pred{3, 4, 5, 10};
  const auto r = forecast_metrics(pred, actual);
  EXPECT_DOUBLE_EQ(r.mse, (1 + 0 + 1 + 4) / 4.0);
  EXPECT_DOUBLE_EQ(r.rmse, std::sqrt(1.5));
  EXPECT_DOUBLE_EQ(r.mae, 1.0);
  EXPECT_DOUBLE_EQ(r.mape, (0.5 + 0 + 1.0 / 6 + 0.25) / 4);
  EXPECT_DOUBLE_EQ(r.r2, 1.0 - 6.0 / 20.0);
}

TEST(ForecastMetrics, RandomPropertiesHold) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(1, 100);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> a(30), p(30);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = u(rng);
      p[i] = u(rng);
    }
    const auto r = forecast_metrics(p, a);
    EXPECT_TRUE(is_consistent(r, 1e-9));
    EXPECT_LE(r.r2, 1.0);
    EXPECT_GE(r.mape, 0.0);
  }
}

TEST(ForecastMetrics, Errors) {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> shorter{1, 2};
  const auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code([&] { forecast_metrics(shorter, a); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(code([&] { forecast_metrics({}, {}); }), ErrorCode::LengthMismatch);
  const std::vector<double> zero{0, 1, 2};
  EXPECT_EQ(code([&] { forecast_metrics(a, zero); }), ErrorCode::ZeroActualInMAPE);
  const std::vector<double> flat{4, 4, 4};
  EXPECT_EQ(code([&] { forecast_metrics(a, flat); }), ErrorCode::ConstantActualInR2);
  EXPECT_EQ(code([&] { improvement_rate(0.0, 1.0); }), ErrorCode::ZeroBaseline);
}

TEST(ForecastMetrics, PublishedRowsAreConsistent) {
  EXPECT_NEAR(std::sqrt(86.956), 9.325, 1e-3);
  EXPECT_NEAR(std::sqrt(63.725), 7.983, 1e-3);
  EXPECT_TRUE(is_consistent({9.325, 86.956, 0, 0, 0}, 1e-3));
  EXPECT_TRUE(is_consistent({7.983, 63.725, 0, 0, 0}, 1e-3));
  EXPECT_FALSE(is_consistent({7.998, 62.734, 0, 0, 0}, 1e-3));
  EXPECT_FALSE(is_consistent({1.0, 1.0, 2.0, 0, 0}, 1e-3));  // mae above rmse
}

TEST(ImprovementRate, PublishedValues) {
  EXPECT_NEAR(improvement_rate(0.905, 0.931), 2.873, 0.01);
  EXPECT_NEAR(improvement_rate(0.174, 0.123), 29.31, 0.01);
  EXPECT_NEAR(improvement_rate(0.902, 0.931), 3.215, 0.01);
  EXPECT_DOUBLE_EQ(improvement_rate(2.0, 1.0), 50.0);
  EXPECT_DOUBLE_EQ(improvement_rate(-2.0, -1.0), 50.0);
}

TEST(MetricsReport, JsonRoundTrip) {
  const MetricsReport r{1.5, 2.25, 1.0, 0.1, 0.8};
  const auto back = nlohmann::json(r).get<MetricsReport>();
  EXPECT_EQ(back.rmse, r.rmse);
  EXPECT_EQ(back.mse, r.mse);
  EXPECT_EQ(back.mae, r.mae);
  EXPECT_EQ(back.mape, r.mape);
  EXPECT_EQ(back.r2, r.r2);
}

}  // namespace
}  // namespace sras
