#pragma once

// MOT-style detection / ground-truth / track files, the camera-motion file,
// and the store-item sales CSV. Parsers report failures as sras::Error with
// the 1-based line number of the offending input line.

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sras/calendar.hpp"
#include "sras/geometry.hpp"
#include "sras/kalman.hpp"

namespace sras {

struct GroundTruthEntry {
  int frame = 1;
  int track_id = 1;
  BBox bbox;
  bool active = true;

  friend bool operator==(const GroundTruthEntry&, const GroundTruthEntry&) = default;
};

struct TrackRecord {
  int frame = 1;
  int track_id = 1;
  BBox bbox;
  double score = 0.0;

  friend bool operator==(const TrackRecord&, const TrackRecord&) = default;
};

struct SalesRecord {
  Date date;
  int store = 0;
  int item = 0;
  long sales = 0;

  friend bool operator==(const SalesRecord&, const SalesRecord&) = default;
};

/// One keyed value from a `date,store,item,<value>` CSV (forecast outputs or
/// sales files read as plain series).
struct KeyedValue {
  Date date;
  int store = 0;
  int item = 0;
  double value = 0.0;

  friend bool operator==(const KeyedValue&, const KeyedValue&) = default;
};

std::vector<Detection> parse_detections(std::istream& in);
void write_detections(std::span<const Detection> dets, std::ostream& out);

std::vector<GroundTruthEntry> parse_ground_truth(std::istream& in);
void write_ground_truth(std::span<const GroundTruthEntry> gts, std::ostream& out);

std::vector<TrackRecord> parse_tracks(std::istream& in);
/// Requires records strictly ordered by (frame, track_id); throws UnsortedInput.
void write_tracks(std::span<const TrackRecord> records, std::ostream& out);

/// Per-frame affine transforms, `frame,a11,a12,a21,a22,tx,ty`.
std::map<int, AffineTransform> parse_cmc(std::istream& in);

std::vector<SalesRecord> parse_sales_csv(std::istream& in);
void write_sales_csv(std::span<const SalesRecord> records, std::ostream& out);

/// Reads any CSV with `date`, `store`, `item` columns plus a value column
/// (`predicted_sales` if present, else `sales`).
std::vector<KeyedValue> parse_keyed_values(std::istream& in);
void write_forecast_csv(std::span<const KeyedValue> rows, std::ostream& out);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_real(double v);

}  // namespace sras
