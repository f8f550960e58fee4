#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sras/io.hpp"
#include "sras/kalman.hpp"

namespace sras {

enum class TrackLifecycle { New, Tracked, Lost, Removed };
enum class TrackerVariant { BotSort, ByteTrack };

std::string_view to_string(TrackLifecycle s);
std::string_view to_string(TrackerVariant v);
std::optional<TrackerVariant> parse_tracker_variant(std::string_view name);

/// True for New->{Tracked,Removed}, Tracked->{Tracked,Lost}, Lost->{Tracked,Removed}.
bool is_legal_transition(TrackLifecycle from, TrackLifecycle to);

struct TrackerConfig {
  TrackerVariant variant = TrackerVariant::BotSort;
  double tau_high = 0.6;
  double tau_low = 0.1;
  double match_cost_stage1 = 0.8;
  double match_cost_stage2 = 0.5;
  double new_track_score = 0.7;
  int max_lost_frames = 30;
  double sigma_p = 1.0 / 20.0;
  double sigma_v = 1.0 / 160.0;
  // Rescue of Tracked tracks with low-score detections. Off only for ablations.
  bool low_score_stage = true;

  /// Throws InvalidThresholds / InvalidArgument.
  void validate() const;
};

void to_json(nlohmann::json& j, const TrackerConfig& c);
/// Missing keys keep their defaults.
void from_json(const nlohmann::json& j, TrackerConfig& c);

struct Track {
  int id = 0;
  TrackLifecycle lifecycle = TrackLifecycle::New;
  KalmanState kstate;
  double last_score = 0.0;
  int frames_since_update = 0;
  int start_frame = 0;
};

struct LifecycleEvent {
  int track_id = 0;
  int frame = 0;
  std::optional<TrackLifecycle> from;  // empty at birth
  TrackLifecycle to = TrackLifecycle::New;
};

/// Online tracking-by-detection state machine shared by both variants; they
/// differ only in whether camera-motion compensation is applied.
///
/// Per frame: predict every live track, optionally warp by the camera motion,
/// split detections by score, match Tracked+Lost tracks to high-score boxes,
/// rescue remaining Tracked tracks with low-score boxes, give New tracks a
/// chance at the leftover high-score boxes, then retire/spawn tracks. Only
/// Tracked tracks are emitted; a New track is confirmed by its first match
/// after birth.
///
/// Not thread-safe; one instance per sequence.
class Tracker {
 public:
  explicit Tracker(TrackerConfig config);

  /// `frame` must exceed the previous call's frame (NonMonotonicFrame) and
  /// every detection must carry it. Each call advances motion by one frame.
  std::vector<TrackRecord> step(int frame, std::span<const Detection> dets,
                                const std::optional<AffineTransform>& cmc = std::nullopt);

  const TrackerConfig& config() const { return config_; }
  const std::vector<Track>& live_tracks() const { return tracks_; }
  int tracks_created() const { return next_id_ - 1; }

  void set_observer(std::function<void(const LifecycleEvent&)> observer) { observer_ = std::move(observer); }

 private:
  void transition(Track& t, TrackLifecycle to, int frame);
  void match_stage(std::span<const std::size_t> track_idx, std::span<const Detection> dets,
                   std::vector<char>& det_used, std::vector<char>& track_matched, double max_cost,
                   std::vector<std::pair<std::size_t, const Detection*>>& matches) const;

  TrackerConfig config_;
  KalmanFilter filter_;
  std::vector<Track> tracks_;
  std::optional<int> last_frame_;
  int next_id_ = 1;
  std::function<void(const LifecycleEvent&)> observer_;
};

struct SequenceRunReport {
  int frames_processed = 0;
  int tracks_created = 0;
  double wall_time = 0.0;  // seconds
  double throughput = 0.0; // frames per second, 0 when wall_time is 0
};

void to_json(nlohmann::json& j, const SequenceRunReport& r);

struct SequenceRun {
  std::vector<TrackRecord> records;
  SequenceRunReport report;
};

/// Steps every frame from the first to the last detection frame, including
/// frames without detections. Detections must be sorted by frame; camera
/// motion for frames absent from `cmc_by_frame` is the identity.
SequenceRun run_sequence(std::span<const Detection> dets, const TrackerConfig& config,
                         const std::map<int, AffineTransform>& cmc_by_frame = {},
                         std::function<void(const LifecycleEvent&)> observer = {});

}  // namespace sras
