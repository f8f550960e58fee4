#pragma once

#include <cstdint>
#include <vector>

#include "sras/forecasting.hpp"
#include "sras/io.hpp"

namespace sras::testing {

struct SceneOptions {
  int agents = 4;
  int frames = 120;
  double noise_px = 2.0;
  double drop_fraction = 0.05;  // whole frames removed from detections and GT
  bool occlusion_dips = true;   // each agent's score falls to 0.3 for a few frames
  double pan_x = 0.0;           // per-frame global camera translation
  double pan_y = 0.0;
  std::uint64_t seed = 1;
};

struct Scene {
  std::vector<Detection> detections;  // sorted by frame
  std::vector<GroundTruthEntry> ground_truth;
  std::vector<int> dropped_frames;
};

/// Constant-velocity agents on separate horizontal lanes, 200 px apart, so
/// no two boxes ever overlap.
Scene make_scene(const SceneOptions& options);

/// Daily series with weekly and annual seasonality plus persistent AR(1)
/// demand shocks and white noise. Values are rounded and kept >= 1.
std::vector<SalesRecord> make_seasonal_sales(int stores, int items, int days, std::uint64_t seed);

}  // namespace sras::testing
