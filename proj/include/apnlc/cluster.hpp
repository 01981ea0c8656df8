#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "apnlc/fft.hpp"

namespace apnlc {

enum class ClusterMethod { AP, KMEANS, FCM };

ClusterMethod parse_cluster_method(std::string_view name);
std::string_view cluster_method_name(ClusterMethod m) noexcept;

/// Output of any of the clustering routines.
struct ClusterModel {
  ClusterMethod method = ClusterMethod::AP;
  std::vector<cplx> centers;
  std::vector<std::size_t> assignment;  // per input point, index into centers
  std::vector<double> membership;       // FCM only, row-major [N x L]
  int n_iterations = 0;
  bool converged = false;
  /// SSE (K-means), F_m (FCM) or net similarity of the exemplar set (AP).
  double objective = 0.0;

  std::size_t n_points() const noexcept { return assignment.size(); }
  std::size_t n_clusters() const noexcept { return centers.size(); }
};

/// Sum of squared distances of points to their assigned centers.
double sum_squared_error(std::span<const cplx> points, const ClusterModel& model);

}  // namespace apnlc
