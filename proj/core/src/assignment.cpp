#include "sras/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sras/error.hpp"

namespace sras {

namespace {

// Shortest augmenting path with potentials on an n x m matrix, n <= m.
// Returns col_of_row (size n). Indices internally are 1-based with 0 as the
// virtual source column.
std::vector<std::size_t> hungarian_rows_le_cols(const CostMatrix& a) {
  const auto n = static_cast<std::size_t>(a.rows());
  const auto m = static_cast<std::size_t>(a.cols());
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> row_of_col(m + 1, 0), way(m + 1, 0);
  std::vector<double> min_slack(m + 1);
  std::vector<char> used(m + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    std::size_t j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = row_of_col[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> col_of_row(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (row_of_col[j] != 0) col_of_row[row_of_col[j] - 1] = j - 1;
  }
  return col_of_row;
}

}  // namespace

double AssignmentResult::total_cost(const CostMatrix& cost) const {
  double total = 0.0;
  for (auto [r, c] : matches) total += cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return total;
}

AssignmentResult solve_assignment(const CostMatrix& cost) {
  if (!cost.allFinite()) throw Error(ErrorCode::NonFiniteCost, "cost matrix contains NaN or infinity");
  const auto rows = static_cast<std::size_t>(cost.rows());
  const auto cols = static_cast<std::size_t>(cost.cols());

  AssignmentResult result;
  std::vector<char> row_used(rows, 0), col_used(cols, 0);
  if (rows > 0 && cols > 0) {
    if (rows <= cols) {
      const auto col_of_row = hungarian_rows_le_cols(cost);
      for (std::size_t r = 0; r < rows; ++r) result.matches.emplace_back(r, col_of_row[r]);
    } else {
      const CostMatrix transposed = cost.transpose();
      const auto row_of_col = hungarian_rows_le_cols(transposed);
      for (std::size_t c = 0; c < cols; ++c) result.matches.emplace_back(row_of_col[c], c);
      std::sort(result.matches.begin(), result.matches.end());
    }
  }
  for (auto [r, c] : result.matches) {
    row_used[r] = 1;
    col_used[c] = 1;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (!row_used[r]) result.unmatched_rows.push_back(r);
  }
  for (std::size_t c = 0; c < cols; ++c) {
    if (!col_used[c]) result.unmatched_cols.push_back(c);
  }
  return result;
}

ScorePartition partition_by_score(std::span<const Detection> dets, double tau_high, double tau_low) {
  if (!(0.0 <= tau_low && tau_low <= tau_high && tau_high <= 1.0)) {
    throw Error(ErrorCode::InvalidThresholds, "require 0 <= tau_low <= tau_high <= 1");
  }
  ScorePartition parts;
  for (const auto& d : dets) {
    if (d.score >= tau_high) {
      parts.high.push_back(d);
    } else if (d.score >= tau_low) {
      parts.low.push_back(d);
    } else {
      parts.discarded.push_back(d);
    }
  }
  return parts;
}

AssignmentResult gate_matches(const AssignmentResult& solved, const CostMatrix& cost, double max_cost) {
  AssignmentResult out;
  out.unmatched_rows = solved.unmatched_rows;
  out.unmatched_cols = solved.unmatched_cols;
  for (auto [r, c] : solved.matches) {
    if (cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) > max_cost) {
      out.unmatched_rows.push_back(r);
      out.unmatched_cols.push_back(c);
    } else {
      out.matches.emplace_back(r, c);
    }
  }
  std::sort(out.unmatched_rows.begin(), out.unmatched_rows.end());
  std::sort(out.unmatched_cols.begin(), out.unmatched_cols.end());
  return out;
}

AssignmentResult associate(std::span<const BBox> track_boxes, std::span<const BBox> det_boxes, double max_cost) {
  if (!(max_cost > 0.0 && max_cost <= 1.0)) {
    throw Error(ErrorCode::InvalidThresholds, "association max_cost must lie in (0, 1]");
  }
  const CostMatrix cost = iou_distance_matrix(track_boxes, det_boxes);
  return gate_matches(solve_assignment(cost), cost, max_cost);
}

}  // namespace sras
