#pragma once

#include <span>

#include <Eigen/Core>

namespace sras {

/// Kalman measurement form: (center-x, center-y, width, height).
using Measurement = Eigen::Vector4d;

/// Row-major dense cost matrix, shared by association and evaluation.
using CostMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Axis-aligned box in continuous pixel coordinates, top-left/width/height form.
/// Area is width * height; there is no "+1" pixel convention.
struct BBox {
  double left = 0.0;
  double top = 0.0;
  double width = 0.0;
  double height = 0.0;

  double right() const { return left + width; }
  double bottom() const { return top + height; }
  double area() const { return width * height; }
  double center_x() const { return left + width / 2.0; }
  double center_y() const { return top + height / 2.0; }
  bool valid() const { return width > 0.0 && height > 0.0; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

inline constexpr int kPersonClass = 1;

struct Detection {
  int frame = 1;
  BBox bbox;
  double score = 0.0;
  int class_id = kPersonClass;

  friend bool operator==(const Detection&, const Detection&) = default;
};

Measurement to_cxcywh(const BBox& b);
BBox from_cxcywh(const Measurement& z);

/// Intersection over union. Returns 0 when the union is empty, so boxes that
/// went degenerate during prediction never produce NaN.
double iou(const BBox& a, const BBox& b);

/// Entry (i, j) = 1 - iou(rows[i], cols[j]).
CostMatrix iou_distance_matrix(std::span<const BBox> rows, std::span<const BBox> cols);

}  // namespace sras
