#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "fasttrack/geometry.hpp"

namespace fasttrack {

/// Cost used for class-incompatible pairs; always above any IoU gate.
inline constexpr double kForbiddenCost = 1.0;

struct AssociationResult {
  std::vector<std::pair<int, int>> matches;  // (row, col), sorted by row
  std::vector<int> unmatched_rows;
  std::vector<int> unmatched_cols;
};

/// Minimum-total-cost one-to-one assignment of a rectangular cost matrix,
/// followed by gating: matched pairs with cost > max_cost are released to the
/// unmatched sets. Ties between equal-cost optima are canonicalized toward
/// the lowest (row, col) indices. Empty matrices yield an empty result.
AssociationResult solve_assignment(const Eigen::MatrixXd& costs, double max_cost);

struct ClassedBox {
  Box box;
  int class_id = 0;
};

/// IoU cost matrix over (tracks x detections): 1 - IoU, with
/// class-incompatible pairs pinned at the forbidden sentinel.
Eigen::MatrixXd iou_cost_matrix(const std::vector<ClassedBox>& tracks,
                                const std::vector<ClassedBox>& detections);

/// Class-gated IoU association; a match requires IoU >= min_iou.
AssociationResult associate(const std::vector<ClassedBox>& tracks,
                            const std::vector<ClassedBox>& detections,
                            double min_iou);

}  // namespace fasttrack
