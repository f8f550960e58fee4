#include "sras/geometry.hpp"

#include <algorithm>

namespace sras {

Measurement to_cxcywh(const BBox& b) {
  return Measurement(b.center_x(), b.center_y(), b.width, b.height);
}

BBox from_cxcywh(const Measurement& z) {
  return BBox{z(0) - z(2) / 2.0, z(1) - z(3) / 2.0, z(2), z(3)};
}

double iou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.left, b.left);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top, b.top);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = std::max(a.area(), 0.0) + std::max(b.area(), 0.0) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

CostMatrix iou_distance_matrix(std::span<const BBox> rows, std::span<const BBox> cols) {
  CostMatrix cost(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0 - iou(rows[i], cols[j]);
    }
  }
  return cost;
}

}  // namespace sras
