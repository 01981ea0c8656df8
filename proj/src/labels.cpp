#include "apnlc/labels.hpp"

#include <limits>

#include "apnlc/error.hpp"

namespace apnlc {

// Shortest augmenting path with potentials, O(n^3). Rows are inserted in
// index order and the first minimal column wins, which fixes tie-breaking.
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n) {
  require(cost.size() == n * n, ErrorCode::DimensionMismatch, "assignment cost is not n x n");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

LabelMap assign_labels(const ClusterModel& model, const Constellation& c) {
  const std::size_t n = c.points.size();
  require(model.centers.size() == n, ErrorCode::DimensionMismatch,
          "assign_labels: " + std::to_string(model.centers.size()) + " centers for " +
              std::to_string(n) + " constellation points");
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = std::norm(model.centers[i] - c.points[j]);
  LabelMap map;
  map.center_to_point = solve_assignment(cost, n);
  for (std::size_t i = 0; i < n; ++i) map.total_cost += cost[i * n + map.center_to_point[i]];
  return map;
}

}  // namespace apnlc
