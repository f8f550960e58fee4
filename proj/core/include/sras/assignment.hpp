#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sras/geometry.hpp"

namespace sras {

struct AssignmentResult {
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (row, col), ascending by row
  std::vector<std::size_t> unmatched_rows;
  std::vector<std::size_t> unmatched_cols;

  double total_cost(const CostMatrix& cost) const;
};

/// Minimum-cost matching of min(rows, cols) pairs (shortest augmenting path
/// Hungarian, O(n^2 m)). Rectangular inputs are handled without padding.
/// Ties are broken deterministically by scan order. Throws NonFiniteCost.
AssignmentResult solve_assignment(const CostMatrix& cost);

struct ScorePartition {
  std::vector<Detection> high;       // score >= tau_high
  std::vector<Detection> low;        // tau_low <= score < tau_high
  std::vector<Detection> discarded;  // score < tau_low
};

/// Throws InvalidThresholds unless 0 <= tau_low <= tau_high <= 1.
ScorePartition partition_by_score(std::span<const Detection> dets, double tau_high, double tau_low);

/// IoU-distance association: solve globally, then demote matches whose cost
/// exceeds max_cost to unmatched on both sides.
AssignmentResult associate(std::span<const BBox> track_boxes, std::span<const BBox> det_boxes, double max_cost);

/// Applies the same post-hoc demotion to an arbitrary cost matrix.
AssignmentResult gate_matches(const AssignmentResult& solved, const CostMatrix& cost, double max_cost);

}  // namespace sras
