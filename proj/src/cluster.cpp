#include "apnlc/cluster.hpp"

#include <string>

#include "apnlc/error.hpp"

namespace apnlc {

ClusterMethod parse_cluster_method(std::string_view name) {
  if (name == "ap" || name == "AP") return ClusterMethod::AP;
  if (name == "kmeans" || name == "KMEANS") return ClusterMethod::KMEANS;
  if (name == "fcm" || name == "FCM") return ClusterMethod::FCM;
  fail(ErrorCode::InvalidArgument, "unknown clustering method: " + std::string(name));
}

std::string_view cluster_method_name(ClusterMethod m) noexcept {
  switch (m) {
    case ClusterMethod::AP: return "AP";
    case ClusterMethod::KMEANS: return "KMEANS";
    case ClusterMethod::FCM: return "FCM";
  }
  return "?";
}

double sum_squared_error(std::span<const cplx> points, const ClusterModel& model) {
  double sse = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    sse += std::norm(points[i] - model.centers[model.assignment[i]]);
  return sse;
}

}  // namespace apnlc
