#include "sras/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <string_view>
#include <tuple>

#include "sras/error.hpp"

namespace sras {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

// Iterates over non-empty lines, handing (line_no, fields, raw) to `fn`.
template <class Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    fn(line_no, split_fields(line), line);
  }
}

[[noreturn]] void malformed(std::size_t line_no, std::string_view raw, std::string_view why) {
  throw Error(ErrorCode::MalformedLine, std::string(why) + ": '" + std::string(raw) + "'", line_no);
}

double to_real(std::string_view field, std::size_t line_no, std::string_view raw) {
  double v = 0.0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) {
    malformed(line_no, raw, "expected a number");
  }
  return v;
}

long to_integer(std::string_view field, std::size_t line_no, std::string_view raw) {
  long v = 0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) malformed(line_no, raw, "expected an integer");
  return v;
}

int to_int(std::string_view field, std::size_t line_no, std::string_view raw) {
  const long v = to_integer(field, line_no, raw);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    malformed(line_no, raw, "integer out of range");
  }
  return static_cast<int>(v);
}

struct MotRow {
  int frame;
  int id;
  BBox bbox;
  double seventh;
};

MotRow parse_mot_row(const std::vector<std::string_view>& f, std::size_t line_no, std::string_view raw) {
  if (f.size() < 7) malformed(line_no, raw, "expected at least 7 comma-separated fields");
  MotRow row{};
  row.frame = to_int(f[0], line_no, raw);
  if (row.frame < 1) malformed(line_no, raw, "frame index must be >= 1");
  row.id = to_int(f[1], line_no, raw);
  row.bbox = BBox{to_real(f[2], line_no, raw), to_real(f[3], line_no, raw), to_real(f[4], line_no, raw),
                  to_real(f[5], line_no, raw)};
  if (!row.bbox.valid()) {
    throw Error(ErrorCode::NonPositiveBox, "width and height must be positive: '" + std::string(raw) + "'", line_no);
  }
  row.seventh = to_real(f[6], line_no, raw);
  return row;
}

void check_score(double score, std::size_t line_no, std::string_view raw) {
  if (score < 0.0 || score > 1.0) {
    throw Error(ErrorCode::ScoreOutOfRange, "score must lie in [0,1]: '" + std::string(raw) + "'", line_no);
  }
}

void check_id(int id, std::size_t line_no, std::string_view raw) {
  if (id < 1) throw Error(ErrorCode::NonPositiveId, "track id must be >= 1: '" + std::string(raw) + "'", line_no);
}

void write_box(std::ostream& out, const BBox& b) {
  out << format_real(b.left) << ',' << format_real(b.top) << ',' << format_real(b.width) << ','
      << format_real(b.height);
}

std::string format_score(double score) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", score);
  return buf;
}

struct CsvHeader {
  std::vector<std::string> names;

  std::ptrdiff_t find(std::string_view name) const {
    auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? -1 : it - names.begin();
  }
};

}  // namespace

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::vector<Detection> parse_detections(std::istream& in) {
  std::vector<Detection> out;
  for_each_line(in, [&](std::size_t line_no, const auto& fields, std::string_view raw) {
    const MotRow row = parse_mot_row(fields, line_no, raw);
    check_score(row.seventh, line_no, raw);
    out.push_back(Detection{row.frame, row.bbox, row.seventh, kPersonClass});
  });
  return out;
}

void write_detections(std::span<const Detection> dets, std::ostream& out) {
  for (const auto& d : dets) {
    out << d.frame << ",-1,";
    write_box(out, d.bbox);
    out << ',' << format_score(d.score) << ",-1,-1,-1\n";
  }
}

std::vector<GroundTruthEntry> parse_ground_truth(std::istream& in) {
  std::vector<GroundTruthEntry> out;
  for_each_line(in, [&](std::size_t line_no, const auto& fields, std::string_view raw) {
    const MotRow row = parse_mot_row(fields, line_no, raw);
    check_id(row.id, line_no, raw);
    out.push_back(GroundTruthEntry{row.frame, row.id, row.bbox, row.seventh != 0.0});
  });
  return out;
}

void write_ground_truth(std::span<const GroundTruthEntry> gts, std::ostream& out) {
  for (const auto& g : gts) {
    out << g.frame << ',' << g.track_id << ',';
    write_box(out, g.bbox);
    out << ',' << (g.active ? 1 : 0) << ",1,1\n";
  }
}

std::vector<TrackRecord> parse_tracks(std::istream& in) {
  std::vector<TrackRecord> out;
  for_each_line(in, [&](std::size_t line_no, const auto& fields, std::string_view raw) {
    const MotRow row = parse_mot_row(fields, line_no, raw);
    check_id(row.id, line_no, raw);
    check_score(row.seventh, line_no, raw);
    out.push_back(TrackRecord{row.frame, row.id, row.bbox, row.seventh});
  });
  return out;
}

void write_tracks(std::span<const TrackRecord> records, std::ostream& out) {
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    if (std::tie(a.frame, a.track_id) >= std::tie(b.frame, b.track_id)) {
      throw Error(ErrorCode::UnsortedInput, "track records must be strictly ordered by (frame, id); record " +
                                                std::to_string(i + 1) + " is out of order");
    }
  }
  for (const auto& r : records) {
    out << r.frame << ',' << r.track_id << ',';
    write_box(out, r.bbox);
    out << ',' << format_score(r.score) << ",-1,-1,-1\n";
  }
}

std::map<int, AffineTransform> parse_cmc(std::istream& in) {
  std::map<int, AffineTransform> out;
  for_each_line(in, [&](std::size_t line_no, const auto& f, std::string_view raw) {
    if (f.size() != 7) malformed(line_no, raw, "expected frame,a11,a12,a21,a22,tx,ty");
    const int frame = to_int(f[0], line_no, raw);
    if (frame < 1) malformed(line_no, raw, "frame index must be >= 1");
    AffineTransform t;
    t.linear << to_real(f[1], line_no, raw), to_real(f[2], line_no, raw), to_real(f[3], line_no, raw),
        to_real(f[4], line_no, raw);
    t.translation << to_real(f[5], line_no, raw), to_real(f[6], line_no, raw);
    if (!out.emplace(frame, t).second) {
      throw Error(ErrorCode::DuplicateKey, "duplicate frame in camera-motion file", line_no);
    }
  });
  return out;
}

std::vector<SalesRecord> parse_sales_csv(std::istream& in) {
  std::vector<SalesRecord> out;
  std::optional<CsvHeader> header;
  std::ptrdiff_t c_date = -1, c_store = -1, c_item = -1, c_sales = -1;
  std::set<std::tuple<int, int, int>> seen;  // (day number, store, item)
  for_each_line(in, [&](std::size_t line_no, const auto& f, std::string_view raw) {
    if (!header) {
      header.emplace();
      for (auto name : f) header->names.emplace_back(name);
      c_date = header->find("date");
      c_store = header->find("store");
      c_item = header->find("item");
      c_sales = header->find("sales");
      if (c_date < 0 || c_store < 0 || c_item < 0 || c_sales < 0) {
        malformed(line_no, raw, "header must name date, store, item and sales columns");
      }
      return;
    }
    if (f.size() != header->names.size()) malformed(line_no, raw, "field count differs from header");
    const auto date = parse_date(f[c_date]);
    if (!date) throw Error(ErrorCode::BadDate, "invalid date '" + std::string(f[c_date]) + "'", line_no);
    SalesRecord r{*date, to_int(f[c_store], line_no, raw), to_int(f[c_item], line_no, raw),
                  to_integer(f[c_sales], line_no, raw)};
    if (r.sales < 0) malformed(line_no, raw, "sales must be non-negative");
    const int day_number = days_between(Date{std::chrono::year{1970}, std::chrono::January, std::chrono::day{1}}, r.date);
    if (!seen.emplace(day_number, r.store, r.item).second) {
      throw Error(ErrorCode::DuplicateKey, "duplicate (date, store, item) '" + std::string(raw) + "'", line_no);
    }
    out.push_back(r);
  });
  if (!header) throw Error(ErrorCode::MalformedLine, "missing header row", 1);
  return out;
}

void write_sales_csv(std::span<const SalesRecord> records, std::ostream& out) {
  out << "date,store,item,sales\n";
  for (const auto& r : records) {
    out << format_date(r.date) << ',' << r.store << ',' << r.item << ',' << r.sales << '\n';
  }
}

std::vector<KeyedValue> parse_keyed_values(std::istream& in) {
  std::vector<KeyedValue> out;
  std::optional<CsvHeader> header;
  std::ptrdiff_t c_date = -1, c_store = -1, c_item = -1, c_value = -1;
  for_each_line(in, [&](std::size_t line_no, const auto& f, std::string_view raw) {
    if (!header) {
      header.emplace();
      for (auto name : f) header->names.emplace_back(name);
      c_date = header->find("date");
      c_store = header->find("store");
      c_item = header->find("item");
      c_value = header->find("predicted_sales");
      if (c_value < 0) c_value = header->find("sales");
      if (c_date < 0 || c_store < 0 || c_item < 0 || c_value < 0) {
        malformed(line_no, raw, "header must name date, store, item and predicted_sales or sales");
      }
      return;
    }
    if (f.size() != header->names.size()) malformed(line_no, raw, "field count differs from header");
    const auto date = parse_date(f[c_date]);
    if (!date) throw Error(ErrorCode::BadDate, "invalid date '" + std::string(f[c_date]) + "'", line_no);
    out.push_back(KeyedValue{*date, to_int(f[c_store], line_no, raw), to_int(f[c_item], line_no, raw),
                             to_real(f[c_value], line_no, raw)});
  });
  if (!header) throw Error(ErrorCode::MalformedLine, "missing header row", 1);
  return out;
}

void write_forecast_csv(std::span<const KeyedValue> rows, std::ostream& out) {
  out << "date,store,item,predicted_sales\n";
  for (const auto& r : rows) {
    out << format_date(r.date) << ',' << r.store << ',' << r.item << ',' << format_real(r.value) << '\n';
  }
}

}  // namespace sras
