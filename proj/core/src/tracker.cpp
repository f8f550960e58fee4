#include "sras/tracker.hpp"

#include <algorithm>
#include <chrono>

#include <nlohmann/json.hpp>

#include "sras/assignment.hpp"
#include "sras/error.hpp"

namespace sras {

std::string_view to_string(TrackLifecycle s) {
  switch (s) {
    case TrackLifecycle::New: return "New";
    case TrackLifecycle::Tracked: return "Tracked";
    case TrackLifecycle::Lost: return "Lost";
    case TrackLifecycle::Removed: return "Removed";
  }
  return "?";
}

std::string_view to_string(TrackerVariant v) {
  return v == TrackerVariant::BotSort ? "botsort" : "bytetrack";
}

std::optional<TrackerVariant> parse_tracker_variant(std::string_view name) {
  if (name == "botsort") return TrackerVariant::BotSort;
  if (name == "bytetrack") return TrackerVariant::ByteTrack;
  return std::nullopt;
}

bool is_legal_transition(TrackLifecycle from, TrackLifecycle to) {
  using L = TrackLifecycle;
  switch (from) {
    case L::New: return to == L::Tracked || to == L::Removed;
    case L::Tracked: return to == L::Tracked || to == L::Lost;
    case L::Lost: return to == L::Tracked || to == L::Removed;
    case L::Removed: return false;
  }
  return false;
}

void TrackerConfig::validate() const {
  if (!(0.0 <= tau_low && tau_low <= tau_high && tau_high <= 1.0)) {
    throw Error(ErrorCode::InvalidThresholds, "require 0 <= tau_low <= tau_high <= 1");
  }
  for (double c : {match_cost_stage1, match_cost_stage2}) {
    if (!(c > 0.0 && c <= 1.0)) throw Error(ErrorCode::InvalidThresholds, "match costs must lie in (0, 1]");
  }
  if (!(new_track_score >= 0.0 && new_track_score <= 1.0)) {
    throw Error(ErrorCode::InvalidThresholds, "new_track_score must lie in [0, 1]");
  }
  if (max_lost_frames < 0) throw Error(ErrorCode::InvalidArgument, "max_lost_frames must be >= 0");
  if (!(sigma_p > 0.0) || !(sigma_v > 0.0)) throw Error(ErrorCode::InvalidArgument, "noise scales must be positive");
}

void to_json(nlohmann::json& j, const TrackerConfig& c) {
  j = nlohmann::json{{"variant", std::string(to_string(c.variant))},
                     {"tau_high", c.tau_high},
                     {"tau_low", c.tau_low},
                     {"match_cost_stage1", c.match_cost_stage1},
                     {"match_cost_stage2", c.match_cost_stage2},
                     {"new_track_score", c.new_track_score},
                     {"max_lost_frames", c.max_lost_frames},
                     {"sigma_p", c.sigma_p},
                     {"sigma_v", c.sigma_v},
                     {"low_score_stage", c.low_score_stage}};
}

void from_json(const nlohmann::json& j, TrackerConfig& c) {
  if (j.contains("variant")) {
    const auto v = parse_tracker_variant(j.at("variant").get<std::string>());
    if (!v) throw Error(ErrorCode::InvalidArgument, "variant must be botsort or bytetrack");
    c.variant = *v;
  }
  c.tau_high = j.value("tau_high", c.tau_high);
  c.tau_low = j.value("tau_low", c.tau_low);
  c.match_cost_stage1 = j.value("match_cost_stage1", c.match_cost_stage1);
  c.match_cost_stage2 = j.value("match_cost_stage2", c.match_cost_stage2);
  c.new_track_score = j.value("new_track_score", c.new_track_score);
  c.max_lost_frames = j.value("max_lost_frames", c.max_lost_frames);
  c.sigma_p = j.value("sigma_p", c.sigma_p);
  c.sigma_v = j.value("sigma_v", c.sigma_v);
  c.low_score_stage = j.value("low_score_stage", c.low_score_stage);
}

void to_json(nlohmann::json& j, const SequenceRunReport& r) {
  j = nlohmann::json{{"frames_processed", r.frames_processed},
                     {"tracks_created", r.tracks_created},
                     {"wall_time", r.wall_time},
                     {"throughput", r.throughput}};
}

Tracker::Tracker(TrackerConfig config)
    : config_(config), filter_(NoiseScales{config.sigma_p, config.sigma_v}) {
  config_.validate();
}

void Tracker::transition(Track& t, TrackLifecycle to, int frame) {
  if (t.lifecycle == to) return;
  if (observer_) observer_(LifecycleEvent{t.id, frame, t.lifecycle, to});
  t.lifecycle = to;
}

void Tracker::match_stage(std::span<const std::size_t> track_idx, std::span<const Detection> dets,
                          std::vector<char>& det_used, std::vector<char>& track_matched, double max_cost,
                          std::vector<std::pair<std::size_t, const Detection*>>& matches) const {
  std::vector<std::size_t> det_idx;
  for (std::size_t d = 0; d < dets.size(); ++d) {
    if (!det_used[d]) det_idx.push_back(d);
  }
  if (track_idx.empty() || det_idx.empty()) return;

  std::vector<BBox> track_boxes, det_boxes;
  track_boxes.reserve(track_idx.size());
  det_boxes.reserve(det_idx.size());
  for (auto i : track_idx) track_boxes.push_back(tracks_[i].kstate.box());
  for (auto d : det_idx) det_boxes.push_back(dets[d].bbox);

  const auto result = associate(track_boxes, det_boxes, max_cost);
  for (auto [r, c] : result.matches) {
    const std::size_t ti = track_idx[r];
    const std::size_t di = det_idx[c];
    det_used[di] = 1;
    track_matched[ti] = 1;
    matches.emplace_back(ti, &dets[di]);
  }
}

std::vector<TrackRecord> Tracker::step(int frame, std::span<const Detection> dets,
                                       const std::optional<AffineTransform>& cmc) {
  if (last_frame_ && frame <= *last_frame_) {
    throw Error(ErrorCode::NonMonotonicFrame,
                "frame " + std::to_string(frame) + " does not follow frame " + std::to_string(*last_frame_));
  }
  for (const auto& d : dets) {
    if (d.frame != frame) throw Error(ErrorCode::InvalidArgument, "detection frame differs from step frame");
  }
  last_frame_ = frame;

  for (auto& t : tracks_) {
    if (t.lifecycle != TrackLifecycle::Tracked) {
      t.kstate.mean(6) = 0.0;
      t.kstate.mean(7) = 0.0;
    }
    t.kstate = filter_.predict(t.kstate);
    ++t.frames_since_update;
  }
  if (config_.variant == TrackerVariant::BotSort && cmc) {
    for (auto& t : tracks_) t.kstate = apply_cmc(t.kstate, *cmc);
  }

  const auto parts = partition_by_score(dets, config_.tau_high, config_.tau_low);

  std::vector<char> track_matched(tracks_.size(), 0);
  std::vector<char> high_used(parts.high.size(), 0);
  std::vector<char> low_used(parts.low.size(), 0);
  std::vector<std::pair<std::size_t, const Detection*>> matches;

  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    const auto s = tracks_[i].lifecycle;
    if (s == TrackLifecycle::Tracked || s == TrackLifecycle::Lost) pool.push_back(i);
  }
  match_stage(pool, parts.high, high_used, track_matched, config_.match_cost_stage1, matches);

  if (config_.low_score_stage) {
    pool.clear();
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
      if (tracks_[i].lifecycle == TrackLifecycle::Tracked && !track_matched[i]) pool.push_back(i);
    }
    match_stage(pool, parts.low, low_used, track_matched, config_.match_cost_stage2, matches);
  }

  pool.clear();
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    if (tracks_[i].lifecycle == TrackLifecycle::New) pool.push_back(i);
  }
  match_stage(pool, parts.high, high_used, track_matched, config_.match_cost_stage1, matches);

  for (auto [ti, det] : matches) {
    Track& t = tracks_[ti];
    t.kstate = filter_.update(t.kstate, to_cxcywh(det->bbox));
    t.last_score = det->score;
    t.frames_since_update = 0;
    transition(t, TrackLifecycle::Tracked, frame);
  }

  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    if (track_matched[i]) continue;
    Track& t = tracks_[i];
    if (t.lifecycle == TrackLifecycle::New) {
      transition(t, TrackLifecycle::Removed, frame);
    } else if (t.lifecycle == TrackLifecycle::Tracked) {
      transition(t, TrackLifecycle::Lost, frame);
    }
    if (t.lifecycle == TrackLifecycle::Lost && t.frames_since_update > config_.max_lost_frames) {
      transition(t, TrackLifecycle::Removed, frame);
    }
  }
  std::erase_if(tracks_, [](const Track& t) { return t.lifecycle == TrackLifecycle::Removed; });

  for (std::size_t d = 0; d < parts.high.size(); ++d) {
    if (high_used[d] || parts.high[d].score < config_.new_track_score) continue;
    Track t;
    t.id = next_id_++;
    t.lifecycle = TrackLifecycle::New;
    t.kstate = filter_.initiate(to_cxcywh(parts.high[d].bbox));
    t.last_score = parts.high[d].score;
    t.start_frame = frame;
    if (observer_) observer_(LifecycleEvent{t.id, frame, std::nullopt, TrackLifecycle::New});
    tracks_.push_back(std::move(t));
  }

  std::vector<TrackRecord> out;
  for (const auto& t : tracks_) {
    if (t.lifecycle == TrackLifecycle::Tracked) out.push_back(TrackRecord{frame, t.id, t.kstate.box(), t.last_score});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.track_id < b.track_id; });
  return out;
}

SequenceRun run_sequence(std::span<const Detection> dets, const TrackerConfig& config,
                         const std::map<int, AffineTransform>& cmc_by_frame,
                         std::function<void(const LifecycleEvent&)> observer) {
  for (std::size_t i = 1; i < dets.size(); ++i) {
    if (dets[i].frame < dets[i - 1].frame) {
      throw Error(ErrorCode::NonMonotonicFrame, "detections must be sorted by frame");
    }
  }
  SequenceRun run;
  Tracker tracker(config);
  if (observer) tracker.set_observer(std::move(observer));
  if (dets.empty()) return run;

  const auto start = std::chrono::steady_clock::now();
  std::size_t begin = 0;
  for (int frame = dets.front().frame; frame <= dets.back().frame; ++frame) {
    std::size_t end = begin;
    while (end < dets.size() && dets[end].frame == frame) ++end;
    std::optional<AffineTransform> cmc;
    if (auto it = cmc_by_frame.find(frame); it != cmc_by_frame.end()) cmc = it->second;
    auto records = tracker.step(frame, dets.subspan(begin, end - begin), cmc);
    run.records.insert(run.records.end(), records.begin(), records.end());
    ++run.report.frames_processed;
    begin = end;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  run.report.tracks_created = tracker.tracks_created();
  run.report.wall_time = elapsed.count();
  run.report.throughput = run.report.wall_time > 0.0 ? run.report.frames_processed / run.report.wall_time : 0.0;
  return run;
}

}  // namespace sras
