#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace sras::testing {

Scene make_scene(const SceneOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> noise(0.0, o.noise_px);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> speed(-3.0, 3.0);

  struct Agent {
    double x, y, vx, vy;
    int dip_start;
  };
  std::vector<Agent> agents;
  for (int a = 0; a < o.agents; ++a) {
    Agent ag{};
    ag.x = 200.0 + 400.0 * unit(rng);
    ag.y = 40.0 + 200.0 * a;
    ag.vx = speed(rng);
    ag.vy = 0.1 * speed(rng);
    ag.dip_start = o.occlusion_dips ? 10 + static_cast<int>(unit(rng) * (o.frames - 30)) : -100;
    agents.push_back(ag);
  }

  std::set<int> dropped;
  for (int f = 2; f <= o.frames; ++f) {
    if (unit(rng) < o.drop_fraction) dropped.insert(f);
  }

  Scene scene;
  scene.dropped_frames.assign(dropped.begin(), dropped.end());
  constexpr double w = 40.0, h = 100.0;
  for (int f = 1; f <= o.frames; ++f) {
    const double cam_x = o.pan_x * (f - 1), cam_y = o.pan_y * (f - 1);
    for (int a = 0; a < o.agents; ++a) {
      const auto& ag = agents[static_cast<std::size_t>(a)];
      const double x = ag.x + ag.vx * (f - 1) + cam_x;
      const double y = ag.y + ag.vy * (f - 1) + cam_y;
      const double nx = noise(rng), ny = noise(rng), nw = noise(rng) * 0.5, nh = noise(rng) * 0.5;
      if (dropped.count(f)) continue;
      scene.ground_truth.push_back(GroundTruthEntry{f, a + 1, BBox{x, y, w, h}, true});
      const bool dipping = f >= ag.dip_start && f < ag.dip_start + 3;
      const double score = dipping ? 0.3 : 0.85 + 0.1 * unit(rng);
      scene.detections.push_back(Detection{f, BBox{x + nx, y + ny, w + nw, h + nh}, score, kPersonClass});
    }
  }
  return scene;
}

std::vector<SalesRecord> make_seasonal_sales(int stores, int items, int days, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Date start{std::chrono::year{2013}, std::chrono::January, std::chrono::day{1}};
  constexpr double two_pi = 2.0 * std::numbers::pi;

  std::vector<SalesRecord> out;
  for (int s = 1; s <= stores; ++s) {
    for (int i = 1; i <= items; ++i) {
      const double base = 30.0 + 40.0 * unit(rng);
      const double weekly = 0.15 + 0.15 * unit(rng);
      const double annual = 0.2 + 0.2 * unit(rng);
      const double phase = two_pi * unit(rng);
      double shock = 0.0;
      for (int t = 0; t < days; ++t) {
        const Date d = add_days(start, t);
        const int wd = iso_weekday(d);
        shock = 0.9 * shock + 0.08 * base * gauss(rng);
        const double season = (1.0 + weekly * std::sin(two_pi * wd / 7.0)) *
                              (1.0 + annual * std::sin(two_pi * t / 365.25 + phase));
        const double value = base * season + shock + 0.02 * base * gauss(rng);
        out.push_back(SalesRecord{d, s, i, std::max(1L, std::lround(value))});
      }
    }
  }
  return out;
}

}  // namespace sras::testing
