#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sras/io.hpp"

namespace sras {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Floor position of a person: bottom-centre of the box.
inline Point2 foot_point(const BBox& b) { return {b.center_x(), b.bottom()}; }

/// Occupancy grid over the frame, counting one foot-point per (frame, track).
class HeatMap {
 public:
  HeatMap(int grid_cols, int grid_rows, double frame_width, double frame_height);

  void add(Point2 p);

  int grid_cols() const { return cols_; }
  int grid_rows() const { return rows_; }
  double frame_width() const { return frame_w_; }
  double frame_height() const { return frame_h_; }

  std::uint64_t at(int col, int row) const { return counts_[static_cast<std::size_t>(row) * cols_ + col]; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }  // row-major
  std::uint64_t total() const;

  /// Cells divided by the total. Throws EmptyHeatMap when every cell is 0.
  std::vector<double> normalized() const;

  void write_csv(std::ostream& out) const;
  void write_normalized_csv(std::ostream& out) const;
  /// Plain "P2" PGM, max count -> 255, all-zero map -> all 0.
  void write_pgm(std::ostream& out) const;

 private:
  int cols_;
  int rows_;
  double frame_w_;
  double frame_h_;
  std::vector<std::uint64_t> counts_;
};

/// Foot-points falling outside the frame are clamped into the border cells.
HeatMap accumulate_heatmap(std::span<const TrackRecord> records, int grid_cols, int grid_rows, double frame_width,
                           double frame_height);

struct CountingLine {
  Point2 p1;
  Point2 p2;
  std::string label;
};

struct CrossingEvent {
  int track_id = 0;
  int frame = 0;
  int direction = 0;  // +1 when the side sign goes from negative to positive, -1 otherwise

  friend bool operator==(const CrossingEvent&, const CrossingEvent&) = default;
};

struct CrossingReport {
  std::string label;
  int positive_crossings = 0;
  int negative_crossings = 0;
  std::vector<CrossingEvent> events;  // ordered by (frame, track_id)
};

void to_json(nlohmann::json& j, const CrossingReport& r);

/// Side of `p` relative to the directed line: sign of (p2 - p1) x (p - p1).
int side_of_line(const CountingLine& line, Point2 p);

/// Counts sign changes of each track's foot-point between consecutive
/// observed frames. Zero-side frames keep the previous non-zero side; gaps are
/// not interpolated. Throws UnsortedRecords if a track's frames do not
/// strictly increase, InvalidArgument if p1 == p2.
CrossingReport count_line_crossings(std::span<const TrackRecord> records, const CountingLine& line);

std::size_t unique_visitors(std::span<const TrackRecord> records);

}  // namespace sras
