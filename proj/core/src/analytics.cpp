#include "sras/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <tuple>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "sras/error.hpp"

namespace sras {

HeatMap::HeatMap(int grid_cols, int grid_rows, double frame_width, double frame_height)
    : cols_(grid_cols), rows_(grid_rows), frame_w_(frame_width), frame_h_(frame_height) {
  if (grid_cols <= 0 || grid_rows <= 0) throw Error(ErrorCode::InvalidArgument, "grid must be positive");
  if (!(frame_width > 0.0) || !(frame_height > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "frame size must be positive");
  }
  counts_.assign(static_cast<std::size_t>(cols_) * rows_, 0);
}

void HeatMap::add(Point2 p) {
  const double cell_w = frame_w_ / cols_;
  const double cell_h = frame_h_ / rows_;
  const auto bin = [](double v, double cell, int n) {
    const double idx = std::floor(v / cell);
    if (!(idx >= 0.0)) return 0;
    return idx >= n ? n - 1 : static_cast<int>(idx);
  };
  const int col = bin(p.x, cell_w, cols_);
  const int row = bin(p.y, cell_h, rows_);
  ++counts_[static_cast<std::size_t>(row) * cols_ + col];
}

std::uint64_t HeatMap::total() const { return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0}); }

std::vector<double> HeatMap::normalized() const {
  const auto sum = total();
  if (sum == 0) throw Error(ErrorCode::EmptyHeatMap, "cannot normalise an all-zero heat map");
  std::vector<double> out(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) out[i] = static_cast<double>(counts_[i]) / static_cast<double>(sum);
  return out;
}

void HeatMap::write_csv(std::ostream& out) const {
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out << (c ? "," : "") << at(c, r);
    out << '\n';
  }
}

void HeatMap::write_normalized_csv(std::ostream& out) const {
  const auto values = normalized();
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out << (c ? "," : "") << format_real(values[static_cast<std::size_t>(r) * cols_ + c]);
    out << '\n';
  }
}

void HeatMap::write_pgm(std::ostream& out) const {
  const auto peak = counts_.empty() ? 0 : *std::max_element(counts_.begin(), counts_.end());
  out << "P2\n" << cols_ << ' ' << rows_ << "\n255\n";
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      const auto v = peak == 0 ? 0 : static_cast<int>(std::lround(255.0 * static_cast<double>(at(c, r)) / static_cast<double>(peak)));
      out << (c ? " " : "") << v;
    }
    out << '\n';
  }
}

HeatMap accumulate_heatmap(std::span<const TrackRecord> records, int grid_cols, int grid_rows, double frame_width,
                           double frame_height) {
  HeatMap map(grid_cols, grid_rows, frame_width, frame_height);
  for (const auto& r : records) map.add(foot_point(r.bbox));
  return map;
}

void to_json(nlohmann::json& j, const CrossingReport& r) {
  auto events = nlohmann::json::array();
  for (const auto& e : r.events) {
    events.push_back({{"track", e.track_id}, {"frame", e.frame}, {"direction", e.direction}});
  }
  j = nlohmann::json{{"label", r.label}, {"positive", r.positive_crossings}, {"negative", r.negative_crossings},
                     {"events", std::move(events)}};
}

int side_of_line(const CountingLine& line, Point2 p) {
  const double cross = (line.p2.x - line.p1.x) * (p.y - line.p1.y) - (line.p2.y - line.p1.y) * (p.x - line.p1.x);
  return (cross > 0.0) - (cross < 0.0);
}

CrossingReport count_line_crossings(std::span<const TrackRecord> records, const CountingLine& line) {
  if (line.p1 == line.p2) throw Error(ErrorCode::InvalidArgument, "counting line endpoints must differ");

  std::map<int, std::vector<const TrackRecord*>> by_track;
  for (const auto& r : records) by_track[r.track_id].push_back(&r);

  CrossingReport report;
  report.label = line.label;
  for (const auto& [id, obs] : by_track) {
    int previous_side = 0;
    for (std::size_t k = 0; k < obs.size(); ++k) {
      if (k > 0 && obs[k]->frame <= obs[k - 1]->frame) {
        throw Error(ErrorCode::UnsortedRecords, "frames of track " + std::to_string(id) + " are not increasing");
      }
      const int side = side_of_line(line, foot_point(obs[k]->bbox));
      if (side == 0) continue;
      if (previous_side != 0 && side != previous_side) {
        report.events.push_back(CrossingEvent{id, obs[k]->frame, side > 0 ? 1 : -1});
      }
      previous_side = side;
    }
  }
  std::sort(report.events.begin(), report.events.end(),
            [](const auto& a, const auto& b) { return std::tie(a.frame, a.track_id) < std::tie(b.frame, b.track_id); });
  for (const auto& e : report.events) (e.direction > 0 ? report.positive_crossings : report.negative_crossings)++;
  return report;
}

std::size_t unique_visitors(std::span<const TrackRecord> records) {
  std::unordered_set<int> ids;
  for (const auto& r : records) ids.insert(r.track_id);
  return ids.size();
}

}  // namespace sras
