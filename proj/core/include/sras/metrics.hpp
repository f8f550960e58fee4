#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sras/io.hpp"

namespace sras {

// ---------------------------------------------------------------- detection

struct LabeledDetection {
  double score = 0.0;
  bool true_positive = false;
};

struct DetectionMatch {
  std::vector<LabeledDetection> labeled;  // descending score
  std::size_t false_negatives = 0;
  std::size_t total_gt = 0;  // active ground-truth boxes
};

/// Greedy per-frame matching in descending score order: a detection is a true
/// positive when its best-IoU unmatched active GT box reaches `iou_threshold`.
/// Inactive GT entries take no part.
DetectionMatch match_detections(std::span<const Detection> dets, std::span<const GroundTruthEntry> gts,
                                 double iou_threshold);

/// All-point interpolated area under the precision envelope. Detections with
/// equal scores enter the curve together. Throws NoGroundTruth if total_gt == 0.
double average_precision(std::span<const LabeledDetection> labeled, std::size_t total_gt);

struct PrCurve {
  double iou_threshold = 0.5;
  std::vector<double> precision;
  std::vector<double> recall;
  double ap = 0.0;
};

struct DetectionEvalReport {
  std::vector<PrCurve> curves;  // IoU 0.50, 0.55, ..., 0.95
  double ap50 = 0.0;
  double map50 = 0.0;  // single class, equal to ap50
  double map50_95 = 0.0;
};

void to_json(nlohmann::json& j, const DetectionEvalReport& r);

/// Throws NoGroundTruth when no GT entry is active.
DetectionEvalReport map_suite(std::span<const Detection> dets, std::span<const GroundTruthEntry> gts);

// ---------------------------------------------------------------- tracking

struct TrackingEvalReport {
  double mota = 0.0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::size_t id_switches = 0;
  std::size_t gt_total = 0;
};

void to_json(nlohmann::json& j, const TrackingEvalReport& r);

/// CLEAR-MOT accuracy. Per frame, previous (gt, track) correspondences that
/// still overlap by `iou_threshold` are kept, the rest are assigned
/// optimally on IoU distance. Throws EmptyGroundTruth.
TrackingEvalReport evaluate_mota(std::span<const GroundTruthEntry> gts, std::span<const TrackRecord> tracks,
                                 double iou_threshold = 0.5);

// ---------------------------------------------------------------- forecasting

struct MetricsReport {
  double rmse = 0.0;
  double mse = 0.0;
  double mae = 0.0;
  double mape = 0.0;  // fraction, not percent
  double r2 = 0.0;
};

void to_json(nlohmann::json& j, const MetricsReport& r);
void from_json(const nlohmann::json& j, MetricsReport& r);

/// Throws LengthMismatch (also for empty input), ZeroActualInMAPE,
/// ConstantActualInR2.
MetricsReport forecast_metrics(std::span<const double> predicted, std::span<const double> actual);

/// |proposed - baseline| / |baseline| * 100. Throws ZeroBaseline.
double improvement_rate(double baseline, double proposed);

/// Internal consistency of a reported row: rmse == sqrt(mse) within
/// `tolerance` and mae <= rmse.
bool is_consistent(const MetricsReport& r, double tolerance);

}  // namespace sras
