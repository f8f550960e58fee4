#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sras/analytics.hpp"
#include "sras/error.hpp"
#include "sras/forecasting.hpp"
#include "sras/io.hpp"
#include "sras/metrics.hpp"
#include "sras/tracker.hpp"

namespace sras::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags every leaf command accepts.
struct Common {
  std::uint64_t seed = 0;
  std::string config;
  std::string out;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, Common& c) {
  c.seed_opt = cmd->add_option("--seed", c.seed, "Base seed for every random draw");
  cmd->add_option("--config", c.config, "JSON file overriding configuration defaults")->check(CLI::ExistingFile);
  cmd->add_option("--out,--output", c.out, "Output file (stdout when omitted)");
}

template <class Parse>
auto read_file(const std::string& path, Parse parse) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open for reading");
  try {
    return parse(in);
  } catch (const Error& e) {
    throw DataError(path + ": " + e.what());
  }
}

void with_output(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw DataError(path + ": cannot open for writing");
  write(file);
  file.flush();
  if (!file) throw DataError(path + ": write failed");
}

/// Object whose keys must all appear in `defaults`.
json load_config(const std::string& path, const json& defaults) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open for reading");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError(path + ": configuration must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw UsageError(path + ": unknown configuration key '" + key + "'");
  }
  return j;
}

template <class Config>
Config merge_config(const std::string& path) {
  const json defaults = Config{};
  json merged = defaults;
  merged.update(load_config(path, defaults));
  try {
    return merged.get<Config>();
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError(std::string(what) + ": '" + std::string(text) + "' is not a number");
  }
  return v;
}

std::vector<double> split_numbers(const std::string& text, char sep, std::size_t expected, std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(sep, start);
    out.push_back(parse_number(std::string_view(text).substr(start, end - start), what));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (out.size() != expected) {
    throw UsageError(std::string(what) + ": expected " + std::to_string(expected) + " values in '" + text + "'");
  }
  return out;
}

CountingLine parse_line(const std::string& text, const std::string& label) {
  const auto v = split_numbers(text, ',', 4, "--line");
  return {{v[0], v[1]}, {v[2], v[3]}, label};
}

// ------------------------------------------------------------------ track

struct TrackArgs {
  Common common;
  std::string detections;
  std::string tracker;
  std::string cmc;
  std::string report;
};

void run_track(const TrackArgs& a, std::ostream& out) {
  TrackerConfig cfg = merge_config<TrackerConfig>(a.common.config);
  if (!a.tracker.empty()) cfg.variant = *parse_tracker_variant(a.tracker);
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto dets = read_file(a.detections, [](std::istream& in) { return parse_detections(in); });
  std::map<int, AffineTransform> cmc;
  if (!a.cmc.empty()) cmc = read_file(a.cmc, [](std::istream& in) { return parse_cmc(in); });
  SequenceRun run;
  try {
    run = run_sequence(dets, cfg, cmc);
  } catch (const Error& e) {
    throw DataError(a.detections + ": " + e.what());
  }
  with_output(a.common.out, out, [&](std::ostream& s) { write_tracks(run.records, s); });
  const std::string report = json(run.report).dump(2) + "\n";
  if (!a.report.empty()) {
    with_output(a.report, out, [&](std::ostream& s) { s << report; });
  } else if (!a.common.out.empty()) {
    out << report;
  }
}

// -------------------------------------------------------------- analytics

struct HeatmapArgs {
  Common common;
  std::string tracks;
  std::string grid = "10x10";
  std::string frame;
  std::string format = "auto";
};

void run_heatmap(const HeatmapArgs& a, std::ostream& out) {
  const auto g = split_numbers(a.grid, 'x', 2, "--grid");
  const auto f = split_numbers(a.frame, 'x', 2, "--frame");
  if (g[0] < 1 || g[1] < 1 || g[0] != static_cast<int>(g[0]) || g[1] != static_cast<int>(g[1])) {
    throw UsageError("--grid: cell counts must be positive integers");
  }
  if (!(f[0] > 0) || !(f[1] > 0)) throw UsageError("--frame: sizes must be positive");
  std::string format = a.format;
  if (format == "auto") format = a.common.out.ends_with(".pgm") ? "pgm" : "csv";
  const auto records = read_file(a.tracks, [](std::istream& in) { return parse_tracks(in); });
  const HeatMap map = accumulate_heatmap(records, static_cast<int>(g[0]), static_cast<int>(g[1]), f[0], f[1]);
  try {
    with_output(a.common.out, out, [&](std::ostream& s) {
      if (format == "pgm") {
        map.write_pgm(s);
      } else if (format == "normalized") {
        map.write_normalized_csv(s);
      } else {
        map.write_csv(s);
      }
    });
  } catch (const Error& e) {
    throw DataError(a.tracks + ": " + e.what());
  }
}

struct CountArgs {
  Common common;
  std::string tracks;
  std::string line;
  std::string label = "line";
};

void run_count(const CountArgs& a, std::ostream& out) {
  const CountingLine line = parse_line(a.line, a.label);
  const auto records = read_file(a.tracks, [](std::istream& in) { return parse_tracks(in); });
  CrossingReport report;
  try {
    report = count_line_crossings(records, line);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw UsageError(std::string("--line: ") + e.what());
    throw DataError(a.tracks + ": " + e.what());
  }
  with_output(a.common.out, out, [&](std::ostream& s) { s << json(report).dump(2) << '\n'; });
}

struct VisitorsArgs {
  Common common;
  std::string tracks;
  std::string method = "unique";
  std::string line;
  std::string label = "line";
};

void run_visitors(const VisitorsArgs& a, std::ostream& out) {
  if (a.method == "line" && a.line.empty()) throw UsageError("--method line requires --line");
  const auto records = read_file(a.tracks, [](std::istream& in) { return parse_tracks(in); });
  json j{{"method", a.method}};
  if (a.method == "unique") {
    j["visitors"] = unique_visitors(records);
  } else {
    CrossingReport report;
    try {
      report = count_line_crossings(records, parse_line(a.line, a.label));
    } catch (const Error& e) {
      throw DataError(a.tracks + ": " + e.what());
    }
    j["label"] = a.label;
    j["visitors"] = report.positive_crossings;
    j["exits"] = report.negative_crossings;
  }
  with_output(a.common.out, out, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
}

// ------------------------------------------------------------------- eval

struct EvalDetectionArgs {
  Common common;
  std::string detections;
  std::string gt;
};

void run_eval_detection(const EvalDetectionArgs& a, std::ostream& out) {
  const auto dets = read_file(a.detections, [](std::istream& in) { return parse_detections(in); });
  const auto gts = read_file(a.gt, [](std::istream& in) { return parse_ground_truth(in); });
  DetectionEvalReport report;
  try {
    report = map_suite(dets, gts);
  } catch (const Error& e) {
    throw DataError(a.gt + ": " + e.what());
  }
  with_output(a.common.out, out, [&](std::ostream& s) { s << json(report).dump(2) << '\n'; });
}

struct EvalTrackingArgs {
  Common common;
  std::string tracks;
  std::string gt;
  double iou = 0.5;
};

void run_eval_tracking(const EvalTrackingArgs& a, std::ostream& out) {
  const auto tracks = read_file(a.tracks, [](std::istream& in) { return parse_tracks(in); });
  const auto gts = read_file(a.gt, [](std::istream& in) { return parse_ground_truth(in); });
  TrackingEvalReport report;
  try {
    report = evaluate_mota(gts, tracks, a.iou);
  } catch (const Error& e) {
    throw DataError(a.gt + ": " + e.what());
  }
  with_output(a.common.out, out, [&](std::ostream& s) { s << json(report).dump(2) << '\n'; });
}

struct EvalForecastArgs {
  Common common;
  std::string pred;
  std::string actual;
};

void run_eval_forecast(const EvalForecastArgs& a, std::ostream& out) {
  const auto pred = read_file(a.pred, [](std::istream& in) { return parse_keyed_values(in); });
  const auto actual = read_file(a.actual, [](std::istream& in) { return parse_keyed_values(in); });
  using Key = std::tuple<int, int, std::string>;
  const auto key = [](const KeyedValue& v) { return Key(v.store, v.item, format_date(v.date)); };
  std::map<Key, double> predicted;
  for (const auto& p : pred) predicted[key(p)] = p.value;
  if (predicted.size() != actual.size()) {
    throw DataError(a.pred + ": " + std::to_string(pred.size()) + " predictions for " + std::to_string(actual.size()) +
                    " actual values");
  }
  std::vector<double> p, y;
  for (const auto& v : actual) {
    const auto it = predicted.find(key(v));
    if (it == predicted.end()) {
      throw DataError(a.pred + ": no prediction for " + format_date(v.date) + " store " + std::to_string(v.store) +
                      " item " + std::to_string(v.item));
    }
    p.push_back(it->second);
    y.push_back(v.value);
  }
  MetricsReport report;
  try {
    report = forecast_metrics(p, y);
  } catch (const Error& e) {
    throw DataError(a.actual + ": " + e.what());
  }
  with_output(a.common.out, out, [&](std::ostream& s) { s << json(report).dump(2) << '\n'; });
}

// --------------------------------------------------------------- forecast

TrainConfig train_config(const Common& c) {
  TrainConfig cfg = merge_config<TrainConfig>(c.config);
  if (c.seed_opt->count() > 0) cfg.seed = c.seed;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::vector<SalesSeries> load_series(const std::string& path, int store, int item) {
  auto series = read_file(path, [](std::istream& in) {
    const auto records = parse_sales_csv(in);
    return build_series(records);
  });
  std::erase_if(series, [&](const SalesSeries& s) { return (store > 0 && s.store != store) || (item > 0 && s.item != item); });
  if (series.empty()) throw DataError(path + ": no series matches the requested store/item");
  return series;
}

struct SeriesResult {
  int store = 0;
  int item = 0;
  TrainResult result;
};

// Series are trained independently with seed = base ^ index, so their results
// do not depend on training order.
std::vector<SeriesResult> train_all(const std::vector<SalesSeries>& series, ModelKind kind, const TrainConfig& cfg,
                                    const std::string& source) {
  std::vector<SeriesResult> out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    TrainConfig local = cfg;
    local.seed = cfg.seed ^ static_cast<std::uint64_t>(i);
    try {
      out.push_back({series[i].store, series[i].item, train(series[i], kind, local)});
    } catch (const Error& e) {
      throw DataError(source + ": store " + std::to_string(series[i].store) + " item " +
                      std::to_string(series[i].item) + ": " + e.what());
    }
  }
  return out;
}

struct TrainArgs {
  Common common;
  std::string sales;
  std::string model = "gru";
  int store = 0;
  int item = 0;
  std::string history;
  std::string predictions;
  std::string metrics;
};

void run_train(const TrainArgs& a, std::ostream& out) {
  const TrainConfig cfg = train_config(a.common);
  const ModelKind kind = *parse_model_kind(a.model);
  const auto series = load_series(a.sales, a.store, a.item);
  if (!a.history.empty() && series.size() != 1) {
    throw UsageError("--history needs exactly one series; narrow with --store and --item");
  }
  const auto results = train_all(series, kind, cfg, a.sales);

  json models = json::array();
  for (const auto& r : results) models.push_back(r.result.model);
  with_output(a.common.out, out, [&](std::ostream& s) { s << models.dump(2) << '\n'; });

  if (!a.history.empty()) {
    with_output(a.history, out, [&](std::ostream& s) { write_loss_history(results[0].result.history, s); });
  }
  if (!a.predictions.empty()) {
    std::vector<KeyedValue> rows;
    for (const auto& r : results) {
      for (std::size_t k = 0; k < r.result.validation_dates.size(); ++k) {
        rows.push_back({r.result.validation_dates[k], r.store, r.item, r.result.validation_predicted[k]});
      }
    }
    with_output(a.predictions, out, [&](std::ostream& s) { write_forecast_csv(rows, s); });
  }
  if (!a.metrics.empty()) {
    json j = json::array();
    for (const auto& r : results) {
      try {
        j.push_back({{"store", r.store},
                     {"item", r.item},
                     {"metrics", forecast_metrics(r.result.validation_predicted, r.result.validation_actual)}});
      } catch (const Error& e) {
        throw DataError(a.sales + ": " + e.what());
      }
    }
    with_output(a.metrics, out, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
  }
}

struct PredictArgs {
  Common common;
  std::string model;
  std::string sales;
  int horizon = 0;
};

void run_predict(const PredictArgs& a, std::ostream& out) {
  std::ifstream in(a.model);
  if (!in) throw DataError(a.model + ": cannot open for reading");
  std::vector<ForecastModel> models;
  try {
    const json j = json::parse(in);
    if (j.is_array()) {
      for (const auto& m : j) models.push_back(m.get<ForecastModel>());
    } else {
      models.push_back(j.get<ForecastModel>());
    }
  } catch (const json::exception& e) {
    throw DataError(a.model + ": " + e.what());
  } catch (const Error& e) {
    throw DataError(a.model + ": " + e.what());
  }
  const auto series = load_series(a.sales, 0, 0);
  std::vector<KeyedValue> rows;
  for (const auto& m : models) {
    const auto it = std::find_if(series.begin(), series.end(),
                                 [&](const SalesSeries& s) { return s.store == m.store && s.item == m.item; });
    if (it == series.end()) {
      throw DataError(a.sales + ": no history for store " + std::to_string(m.store) + " item " + std::to_string(m.item));
    }
    std::vector<double> values;
    try {
      values = predict(m, *it, a.horizon);
    } catch (const Error& e) {
      throw DataError(a.sales + ": " + e.what());
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
      rows.push_back({add_days(it->end(), static_cast<int>(k) + 1), m.store, m.item, values[k]});
    }
  }
  with_output(a.common.out, out, [&](std::ostream& s) { write_forecast_csv(rows, s); });
}

// --------------------------------------------------------- compare-models

struct CompareArgs {
  Common common;
  std::string sales;
  std::vector<std::string> models{"linear", "lstm", "gru"};
  std::vector<std::string> reports;
};

std::string display_name(ModelKind k) {
  switch (k) {
    case ModelKind::Linear: return "Linear Regression";
    case ModelKind::Lstm: return "LSTM";
    case ModelKind::Gru: return "GRU";
  }
  return "?";
}

void write_table(const std::vector<std::pair<std::string, MetricsReport>>& rows, std::ostream& s) {
  std::size_t width = 5;
  for (const auto& [name, r] : rows) width = std::max(width, name.size());
  s << std::left << std::setw(static_cast<int>(width)) << "Model" << std::right;
  for (const char* h : {"RMSE", "MSE", "MAE", "MAPE", "R2"}) s << std::setw(10) << h;
  s << '\n' << std::fixed << std::setprecision(3);
  for (const auto& [name, r] : rows) {
    s << std::left << std::setw(static_cast<int>(width)) << name << std::right;
    for (double v : {r.rmse, r.mse, r.mae, r.mape, r.r2}) s << std::setw(10) << v;
    s << '\n';
  }
  const auto gru = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.first == "GRU"; });
  if (gru == rows.end()) return;
  s << "\nGRU improvement rate (%)\n";
  for (const auto& [name, r] : rows) {
    if (name == "GRU") continue;
    s << "  vs " << name << ":";
    for (auto [label, base, mine] : {std::tuple{"R2", r.r2, gru->second.r2}, std::tuple{"MAPE", r.mape, gru->second.mape}}) {
      s << ' ' << label << ' ';
      if (base == 0.0) {
        s << "n/a";
      } else {
        s << improvement_rate(base, mine);
      }
    }
    s << '\n';
  }
}

void run_compare(const CompareArgs& a, std::ostream& out) {
  if (a.sales.empty() == a.reports.empty()) throw UsageError("give either --sales or --report, not both");
  std::vector<std::pair<std::string, MetricsReport>> rows;
  if (!a.reports.empty()) {
    for (const auto& spec : a.reports) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("--report expects NAME=FILE, got '" + spec + "'");
      const std::string name = spec.substr(0, eq);
      const std::string path = spec.substr(eq + 1);
      std::ifstream in(path);
      if (!in) throw DataError(path + ": cannot open for reading");
      try {
        rows.emplace_back(name, json::parse(in).get<MetricsReport>());
      } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
      }
    }
  } else {
    const TrainConfig cfg = train_config(a.common);
    const auto series = load_series(a.sales, 0, 0);
    for (const auto& m : a.models) {
      const auto kind = parse_model_kind(m);
      if (!kind) throw UsageError("--models: unknown model '" + m + "'");
      std::vector<double> p, y;
      for (const auto& r : train_all(series, *kind, cfg, a.sales)) {
        p.insert(p.end(), r.result.validation_predicted.begin(), r.result.validation_predicted.end());
        y.insert(y.end(), r.result.validation_actual.begin(), r.result.validation_actual.end());
      }
      try {
        rows.emplace_back(display_name(*kind), forecast_metrics(p, y));
      } catch (const Error& e) {
        throw DataError(a.sales + ": " + e.what());
      }
    }
  }
  with_output(a.common.out, out, [&](std::ostream& s) { write_table(rows, s); });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Retail video and sales analytics", "sras"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sras 0.1.0");

  const auto choices = [](std::initializer_list<std::string> names) { return CLI::IsMember(std::vector(names)); };

  TrackArgs track;
  auto* track_cmd = app.add_subcommand("track", "Run the tracker over a MOT detection file");
  track_cmd->add_option("--detections", track.detections, "MOT detection file")->required()->check(CLI::ExistingFile);
  track_cmd->add_option("--tracker", track.tracker, "Pipeline variant (default botsort)")
      ->check(choices({"botsort", "bytetrack"}));
  track_cmd->add_option("--cmc", track.cmc, "Per-frame camera motion file")->check(CLI::ExistingFile);
  track_cmd->add_option("--report", track.report, "Run-report JSON file (stdout when --out is set)");
  add_common(track_cmd, track.common);

  auto* analytics = app.add_subcommand("analytics", "Heat maps and visitor counts from track files");
  analytics->require_subcommand(1);

  HeatmapArgs heat;
  auto* heat_cmd = analytics->add_subcommand("heatmap", "Foot-point occupancy grid");
  heat_cmd->add_option("--tracks", heat.tracks, "MOT track file")->required()->check(CLI::ExistingFile);
  heat_cmd->add_option("--grid", heat.grid, "Grid as COLSxROWS")->capture_default_str();
  heat_cmd->add_option("--frame", heat.frame, "Frame size as WIDTHxHEIGHT")->required();
  heat_cmd->add_option("--format", heat.format, "pgm, csv, normalized, or auto (by --out extension)")
      ->check(choices({"auto", "pgm", "csv", "normalized"}))
      ->capture_default_str();
  add_common(heat_cmd, heat.common);

  CountArgs count;
  auto* count_cmd = analytics->add_subcommand("count", "Line-crossing counts");
  count_cmd->add_option("--tracks", count.tracks, "MOT track file")->required()->check(CLI::ExistingFile);
  count_cmd->add_option("--line", count.line, "Counting line as x1,y1,x2,y2")->required();
  count_cmd->add_option("--label", count.label, "Line label")->capture_default_str();
  add_common(count_cmd, count.common);

  VisitorsArgs visitors;
  auto* visitors_cmd = analytics->add_subcommand("visitors", "Visitor count");
  visitors_cmd->add_option("--tracks", visitors.tracks, "MOT track file")->required()->check(CLI::ExistingFile);
  visitors_cmd->add_option("--method", visitors.method, "unique: distinct ids; line: positive crossings of --line")
      ->check(choices({"unique", "line"}))
      ->capture_default_str();
  visitors_cmd->add_option("--line", visitors.line, "Counting line as x1,y1,x2,y2");
  visitors_cmd->add_option("--label", visitors.label, "Line label")->capture_default_str();
  add_common(visitors_cmd, visitors.common);

  auto* eval = app.add_subcommand("eval", "Evaluation reports");
  eval->require_subcommand(1);

  EvalDetectionArgs edet;
  auto* edet_cmd = eval->add_subcommand("detection", "AP and mAP of detections against ground truth");
  edet_cmd->add_option("--detections", edet.detections, "MOT detection file")->required()->check(CLI::ExistingFile);
  edet_cmd->add_option("--gt", edet.gt, "MOT ground-truth file")->required()->check(CLI::ExistingFile);
  add_common(edet_cmd, edet.common);

  EvalTrackingArgs etrk;
  auto* etrk_cmd = eval->add_subcommand("tracking", "CLEAR-MOT accuracy of a track file");
  etrk_cmd->add_option("--tracks", etrk.tracks, "MOT track file")->required()->check(CLI::ExistingFile);
  etrk_cmd->add_option("--gt", etrk.gt, "MOT ground-truth file")->required()->check(CLI::ExistingFile);
  etrk_cmd->add_option("--iou", etrk.iou, "Match threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  add_common(etrk_cmd, etrk.common);

  EvalForecastArgs efc;
  auto* efc_cmd = eval->add_subcommand("forecast", "Forecast error metrics");
  efc_cmd->add_option("--pred", efc.pred, "Forecast CSV (date,store,item,predicted_sales)")
      ->required()
      ->check(CLI::ExistingFile);
  efc_cmd->add_option("--actual", efc.actual, "Sales CSV with the true values")->required()->check(CLI::ExistingFile);
  add_common(efc_cmd, efc.common);

  auto* forecast = app.add_subcommand("forecast", "Train and apply demand models");
  forecast->require_subcommand(1);

  TrainArgs tr;
  auto* train_cmd = forecast->add_subcommand("train", "Fit one model per (store, item) series");
  train_cmd->add_option("--sales", tr.sales, "Sales CSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--model", tr.model, "Model kind")->check(choices({"linear", "lstm", "gru"}))->capture_default_str();
  train_cmd->add_option("--store", tr.store, "Only this store");
  train_cmd->add_option("--item", tr.item, "Only this item");
  train_cmd->add_option("--history", tr.history, "Loss history CSV (single series only)");
  train_cmd->add_option("--predictions", tr.predictions, "Validation forecast CSV");
  train_cmd->add_option("--metrics", tr.metrics, "Validation metrics JSON");
  add_common(train_cmd, tr.common);

  PredictArgs pr;
  auto* predict_cmd = forecast->add_subcommand("predict", "Rolling forecast after the end of the history");
  predict_cmd->add_option("--model", pr.model, "Model JSON written by forecast train")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--sales", pr.sales, "History sales CSV")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--horizon", pr.horizon, "Days to forecast")->required()->check(CLI::NonNegativeNumber);
  add_common(predict_cmd, pr.common);

  CompareArgs cmp;
  auto* compare_cmd = app.add_subcommand("compare-models", "Metric table with GRU improvement rates");
  compare_cmd->add_option("--sales", cmp.sales, "Sales CSV; trains every model in --models")->check(CLI::ExistingFile);
  compare_cmd->add_option("--models", cmp.models, "Models to train")
      ->delimiter(',')
      ->check(choices({"linear", "lstm", "gru"}))
      ->capture_default_str();
  compare_cmd->add_option("--report", cmp.reports, "NAME=FILE metrics JSON (repeatable)");
  add_common(compare_cmd, cmp.common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (track_cmd->parsed()) {
      run_track(track, out);
    } else if (heat_cmd->parsed()) {
      run_heatmap(heat, out);
    } else if (count_cmd->parsed()) {
      run_count(count, out);
    } else if (visitors_cmd->parsed()) {
      run_visitors(visitors, out);
    } else if (edet_cmd->parsed()) {
      run_eval_detection(edet, out);
    } else if (etrk_cmd->parsed()) {
      run_eval_tracking(etrk, out);
    } else if (efc_cmd->parsed()) {
      run_eval_forecast(efc, out);
    } else if (train_cmd->parsed()) {
      run_train(tr, out);
    } else if (predict_cmd->parsed()) {
      run_predict(pr, out);
    } else if (compare_cmd->parsed()) {
      run_compare(cmp, out);
    }
  } catch (const UsageError& e) {
    err << "sras: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "sras: data error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    err << "sras: data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace sras::cli
