#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "apnlc/cluster.hpp"

namespace apnlc {

struct FcmOptions {
  double m = 2.0;
  int max_iter = 300;
  double tol = 1e-6;
  std::uint64_t seed = 1;
  /// Record F_m after every membership update.
  bool keep_history = false;
};

struct FcmResult {
  ClusterModel model;
  std::vector<double> objective_history;
};

/// Fuzzy c-means. Centers start from kmeanspp_seed and memberships from them, then
///   c_j  = sum_i mu_ij^m x_i / sum_i mu_ij^m
///   mu_ij = 1 / sum_l (|x_i - c_j| / |x_i - c_l|)^(2/(m-1))
/// alternate until |F_m(t) - F_m(t-1)| < tol. A point sitting exactly on a
/// center gets membership 1 there (first such center) and 0 elsewhere.
/// Hard assignment is argmax_j mu_ij.
FcmResult fcm_run(std::span<const cplx> points, std::size_t k, const FcmOptions& opts = {});

inline ClusterModel fcm_cluster(std::span<const cplx> points, std::size_t k,
                                const FcmOptions& opts = {}) {
  return fcm_run(points, k, opts).model;
}

/// F_m = sum_ij mu_ij^m |x_i - c_j|^2.
double fcm_objective(std::span<const cplx> points, std::span<const cplx> centers,
                     std::span<const double> membership, double m);

}  // namespace apnlc
