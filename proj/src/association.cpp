#include "fasttrack/association.hpp"

#include <algorithm>
#include <limits>

namespace fasttrack {

namespace {

// Jonker-Volgenant style shortest augmenting path LAP, requires rows <= cols.
// Returns for each row the assigned column.
std::vector<int> solve_lap(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(static_cast<size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<size_t>(m) + 1, 0.0);
  std::vector<int> p(static_cast<size_t>(m) + 1, 0);    // col -> row (1-based)
  std::vector<int> way(static_cast<size_t>(m) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<size_t>(m) + 1, inf);
    std::vector<char> used(static_cast<size_t>(m) + 1, 0);
    do {
      used[static_cast<size_t>(j0)] = 1;
      const int i0 = p[static_cast<size_t>(j0)];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        const double cur = a(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
        if (cur < minv[static_cast<size_t>(j)]) {
          minv[static_cast<size_t>(j)] = cur;
          way[static_cast<size_t>(j)] = j0;
        }
        if (minv[static_cast<size_t>(j)] < delta) {
          delta = minv[static_cast<size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<size_t>(j)]) {
          u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
          v[static_cast<size_t>(j)] -= delta;
        } else {
          minv[static_cast<size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<size_t>(j0)];
      p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(static_cast<size_t>(n), -1);
  for (int j = 1; j <= m; ++j)
    if (p[static_cast<size_t>(j)] != 0)
      row_to_col[static_cast<size_t>(p[static_cast<size_t>(j)]) - 1] = j - 1;
  return row_to_col;
}

// Swap equal-cost pairs toward the lowest (row, col) order so that equal-cost
// optima resolve the same way on every run.
void canonicalize_ties(const Eigen::MatrixXd& costs,
                       std::vector<std::pair<int, int>>& matches) {
  bool changed = true;
  int guard = 0;
  while (changed && guard++ < 64) {
    changed = false;
    for (size_t a = 0; a < matches.size(); ++a) {
      for (size_t b = a + 1; b < matches.size(); ++b) {
        auto& [i1, j1] = matches[a];
        auto& [i2, j2] = matches[b];
        if (j2 < j1 &&
            costs(i1, j1) + costs(i2, j2) == costs(i1, j2) + costs(i2, j1)) {
          std::swap(j1, j2);
          changed = true;
        }
      }
    }
  }
}

}  // namespace

AssociationResult solve_assignment(const Eigen::MatrixXd& costs, double max_cost) {
  AssociationResult result;
  const int rows = static_cast<int>(costs.rows());
  const int cols = static_cast<int>(costs.cols());
  if (rows == 0 || cols == 0) {
    for (int i = 0; i < rows; ++i) result.unmatched_rows.push_back(i);
    for (int j = 0; j < cols; ++j) result.unmatched_cols.push_back(j);
    return result;
  }

  std::vector<std::pair<int, int>> matches;
  if (rows <= cols) {
    const std::vector<int> rc = solve_lap(costs);
    for (int i = 0; i < rows; ++i)
      if (rc[static_cast<size_t>(i)] >= 0) matches.emplace_back(i, rc[static_cast<size_t>(i)]);
  } else {
    const std::vector<int> cr = solve_lap(costs.transpose());
    for (int j = 0; j < cols; ++j)
      if (cr[static_cast<size_t>(j)] >= 0) matches.emplace_back(cr[static_cast<size_t>(j)], j);
  }
  std::sort(matches.begin(), matches.end());
  canonicalize_ties(costs, matches);
  std::sort(matches.begin(), matches.end());

  std::vector<char> row_matched(static_cast<size_t>(rows), 0);
  std::vector<char> col_matched(static_cast<size_t>(cols), 0);
  for (const auto& [i, j] : matches) {
    if (costs(i, j) <= max_cost) {
      result.matches.emplace_back(i, j);
      row_matched[static_cast<size_t>(i)] = 1;
      col_matched[static_cast<size_t>(j)] = 1;
    }
  }
  for (int i = 0; i < rows; ++i)
    if (!row_matched[static_cast<size_t>(i)]) result.unmatched_rows.push_back(i);
  for (int j = 0; j < cols; ++j)
    if (!col_matched[static_cast<size_t>(j)]) result.unmatched_cols.push_back(j);
  return result;
}

Eigen::MatrixXd iou_cost_matrix(const std::vector<ClassedBox>& tracks,
                                const std::vector<ClassedBox>& detections) {
  Eigen::MatrixXd costs(tracks.size(), detections.size());
  for (size_t i = 0; i < tracks.size(); ++i) {
    for (size_t j = 0; j < detections.size(); ++j) {
      if (tracks[i].class_id != detections[j].class_id) {
        costs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kForbiddenCost;
      } else {
        costs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            1.0 - iou(tracks[i].box, detections[j].box);
      }
    }
  }
  return costs;
}

AssociationResult associate(const std::vector<ClassedBox>& tracks,
                            const std::vector<ClassedBox>& detections,
                            double min_iou) {
  return solve_assignment(iou_cost_matrix(tracks, detections), 1.0 - min_iou);
}

}  // namespace fasttrack
