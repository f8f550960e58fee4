#include "sras/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "sras/assignment.hpp"
#include "sras/error.hpp"

namespace sras {

namespace {

struct CurvePoint {
  double recall;
  double precision;
};

// One point per distinct score, after all detections at that score are in.
std::vector<CurvePoint> pr_points(std::span<const LabeledDetection> labeled, std::size_t total_gt) {
  std::vector<LabeledDetection> sorted(labeled.begin(), labeled.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  std::vector<CurvePoint> points;
  std::size_t tp = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    tp += sorted[k].true_positive ? 1 : 0;
    if (k + 1 < sorted.size() && sorted[k + 1].score == sorted[k].score) continue;
    const double n = static_cast<double>(k + 1);
    points.push_back({static_cast<double>(tp) / static_cast<double>(total_gt), static_cast<double>(tp) / n});
  }
  return points;
}

double area_under_envelope(const std::vector<CurvePoint>& points) {
  std::vector<double> envelope(points.size());
  double running = 0.0;
  for (std::size_t k = points.size(); k-- > 0;) {
    running = std::max(running, points[k].precision);
    envelope[k] = running;
  }
  double area = 0.0, previous_recall = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    area += (points[k].recall - previous_recall) * envelope[k];
    previous_recall = points[k].recall;
  }
  return std::clamp(area, 0.0, 1.0);
}

std::size_t count_active(std::span<const GroundTruthEntry> gts) {
  return static_cast<std::size_t>(std::count_if(gts.begin(), gts.end(), [](const auto& g) { return g.active; }));
}

}  // namespace

DetectionMatch match_detections(std::span<const Detection> dets, std::span<const GroundTruthEntry> gts,
                                 double iou_threshold) {
  std::map<int, std::vector<const GroundTruthEntry*>> gt_by_frame;
  for (const auto& g : gts) {
    if (g.active) gt_by_frame[g.frame].push_back(&g);
  }
  std::map<const GroundTruthEntry*, bool> taken;

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return dets[a].score > dets[b].score; });

  DetectionMatch out;
  out.total_gt = count_active(gts);
  std::size_t tp = 0;
  for (auto idx : order) {
    const auto& d = dets[idx];
    const GroundTruthEntry* best = nullptr;
    double best_iou = -1.0;
    if (auto it = gt_by_frame.find(d.frame); it != gt_by_frame.end()) {
      for (const auto* g : it->second) {
        if (taken[g]) continue;
        const double o = iou(d.bbox, g->bbox);
        if (o > best_iou) {
          best_iou = o;
          best = g;
        }
      }
    }
    const bool hit = best != nullptr && best_iou >= iou_threshold;
    if (hit) {
      taken[best] = true;
      ++tp;
    }
    out.labeled.push_back({d.score, hit});
  }
  out.false_negatives = out.total_gt - tp;
  return out;
}

double average_precision(std::span<const LabeledDetection> labeled, std::size_t total_gt) {
  if (total_gt == 0) throw Error(ErrorCode::NoGroundTruth, "average precision needs at least one GT box");
  return area_under_envelope(pr_points(labeled, total_gt));
}

DetectionEvalReport map_suite(std::span<const Detection> dets, std::span<const GroundTruthEntry> gts) {
  const std::size_t total_gt = count_active(gts);
  if (total_gt == 0) throw Error(ErrorCode::NoGroundTruth, "no active ground-truth boxes");

  DetectionEvalReport report;
  double sum = 0.0;
  for (int step = 0; step < 10; ++step) {
    PrCurve curve;
    curve.iou_threshold = (50.0 + 5.0 * step) / 100.0;
    const auto match = match_detections(dets, gts, curve.iou_threshold);
    for (const auto& p : pr_points(match.labeled, total_gt)) {
      curve.recall.push_back(p.recall);
      curve.precision.push_back(p.precision);
    }
    curve.ap = average_precision(match.labeled, total_gt);
    sum += curve.ap;
    report.curves.push_back(std::move(curve));
  }
  report.ap50 = report.curves.front().ap;
  report.map50 = report.ap50;
  report.map50_95 = sum / 10.0;
  return report;
}

void to_json(nlohmann::json& j, const DetectionEvalReport& r) {
  auto curves = nlohmann::json::array();
  for (const auto& c : r.curves) {
    curves.push_back({{"iou_threshold", c.iou_threshold}, {"ap", c.ap}, {"precision", c.precision}, {"recall", c.recall}});
  }
  j = nlohmann::json{{"ap50", r.ap50}, {"map50", r.map50}, {"map50_95", r.map50_95}, {"curves", std::move(curves)}};
}

TrackingEvalReport evaluate_mota(std::span<const GroundTruthEntry> gts, std::span<const TrackRecord> tracks,
                                 double iou_threshold) {
  std::map<int, std::vector<const GroundTruthEntry*>> gt_by_frame;
  std::map<int, std::vector<const TrackRecord*>> tr_by_frame;
  std::set<int> frames;
  for (const auto& g : gts) {
    if (!g.active) continue;
    gt_by_frame[g.frame].push_back(&g);
    frames.insert(g.frame);
  }
  for (const auto& t : tracks) {
    tr_by_frame[t.frame].push_back(&t);
    frames.insert(t.frame);
  }

  TrackingEvalReport report;
  for (const auto& [f, list] : gt_by_frame) report.gt_total += list.size();
  if (report.gt_total == 0) throw Error(ErrorCode::EmptyGroundTruth, "no active ground-truth entries");

  std::map<int, int> last_match;  // gt id -> track id
  static const std::vector<const GroundTruthEntry*> no_gt;
  static const std::vector<const TrackRecord*> no_tr;

  for (int frame : frames) {
    const auto git = gt_by_frame.find(frame);
    const auto tit = tr_by_frame.find(frame);
    const auto& fg = git == gt_by_frame.end() ? no_gt : git->second;
    const auto& ft = tit == tr_by_frame.end() ? no_tr : tit->second;

    std::vector<char> gt_done(fg.size(), 0), tr_done(ft.size(), 0);

    for (std::size_t g = 0; g < fg.size(); ++g) {
      auto prev = last_match.find(fg[g]->track_id);
      if (prev == last_match.end()) continue;
      for (std::size_t t = 0; t < ft.size(); ++t) {
        if (tr_done[t] || ft[t]->track_id != prev->second) continue;
        if (iou(fg[g]->bbox, ft[t]->bbox) >= iou_threshold) {
          gt_done[g] = tr_done[t] = 1;
        }
        break;
      }
    }

    std::vector<std::size_t> gi, ti;
    for (std::size_t g = 0; g < fg.size(); ++g) {
      if (!gt_done[g]) gi.push_back(g);
    }
    for (std::size_t t = 0; t < ft.size(); ++t) {
      if (!tr_done[t]) ti.push_back(t);
    }
    if (!gi.empty() && !ti.empty()) {
      CostMatrix cost(static_cast<Eigen::Index>(gi.size()), static_cast<Eigen::Index>(ti.size()));
      for (std::size_t a = 0; a < gi.size(); ++a) {
        for (std::size_t b = 0; b < ti.size(); ++b) {
          cost(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1.0 - iou(fg[gi[a]]->bbox, ft[ti[b]]->bbox);
        }
      }
      for (auto [a, b] : solve_assignment(cost).matches) {
        const auto* g = fg[gi[a]];
        const auto* t = ft[ti[b]];
        if (iou(g->bbox, t->bbox) < iou_threshold) continue;
        gt_done[gi[a]] = tr_done[ti[b]] = 1;
        auto prev = last_match.find(g->track_id);
        if (prev != last_match.end() && prev->second != t->track_id) ++report.id_switches;
        last_match[g->track_id] = t->track_id;
      }
    }

    report.false_negatives += static_cast<std::size_t>(std::count(gt_done.begin(), gt_done.end(), 0));
    report.false_positives += static_cast<std::size_t>(std::count(tr_done.begin(), tr_done.end(), 0));
  }

  report.mota = 1.0 - static_cast<double>(report.false_positives + report.false_negatives + report.id_switches) /
                          static_cast<double>(report.gt_total);
  return report;
}

void to_json(nlohmann::json& j, const TrackingEvalReport& r) {
  j = nlohmann::json{{"mota", r.mota},
                     {"false_positives", r.false_positives},
                     {"false_negatives", r.false_negatives},
                     {"id_switches", r.id_switches},
                     {"gt_total", r.gt_total}};
}

MetricsReport forecast_metrics(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size() || actual.empty()) {
    throw Error(ErrorCode::LengthMismatch, "predicted and actual series must have equal, nonzero length");
  }
  const auto n = static_cast<double>(actual.size());
  const double mean_actual = std::accumulate(actual.begin(), actual.end(), 0.0) / n;
  double sq = 0.0, abs_err = 0.0, pct = 0.0, total_var = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = predicted[i] - actual[i];
    if (actual[i] == 0.0) throw Error(ErrorCode::ZeroActualInMAPE, "actual value " + std::to_string(i) + " is zero");
    sq += e * e;
    abs_err += std::abs(e);
    pct += std::abs(e) / std::abs(actual[i]);
    total_var += (actual[i] - mean_actual) * (actual[i] - mean_actual);
  }
  if (total_var == 0.0) throw Error(ErrorCode::ConstantActualInR2, "actual series is constant");
  MetricsReport r;
  r.mse = sq / n;
  r.rmse = std::sqrt(r.mse);
  r.mae = abs_err / n;
  r.mape = pct / n;
  r.r2 = 1.0 - sq / total_var;
  return r;
}

double improvement_rate(double baseline, double proposed) {
  if (baseline == 0.0) throw Error(ErrorCode::ZeroBaseline, "baseline metric is zero");
  return std::abs(proposed - baseline) / std::abs(baseline) * 100.0;
}

bool is_consistent(const MetricsReport& r, double tolerance) {
  return std::abs(r.rmse - std::sqrt(r.mse)) <= tolerance && r.mae <= r.rmse + tolerance;
}

void to_json(nlohmann::json& j, const MetricsReport& r) {
  j = nlohmann::json{{"rmse", r.rmse}, {"mse", r.mse}, {"mae", r.mae}, {"mape", r.mape}, {"r2", r.r2}};
}

void from_json(const nlohmann::json& j, MetricsReport& r) {
  j.at("rmse").get_to(r.rmse);
  j.at("mse").get_to(r.mse);
  j.at("mae").get_to(r.mae);
  j.at("mape").get_to(r.mape);
  j.at("r2").get_to(r.r2);
}

}  // namespace sras
