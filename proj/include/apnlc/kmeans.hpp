#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "apnlc/cluster.hpp"
#include "apnlc/rng.hpp"

namespace apnlc {

struct KmeansOptions {
  int max_iter = 300;
  /// Number of seeded initializations; the lowest final SSE wins.
  int n_init = 16;
  std::uint64_t seed = 1;
};

/// k distinct seed points drawn D^2-weighted (k-means++): the first
/// uniformly, each next one with probability proportional to its squared
/// distance from the nearest seed so far. When fewer than k distinct
/// locations exist the rest are drawn uniformly from the unused points.
std::vector<cplx> kmeanspp_seed(std::span<const cplx> points, std::size_t k, Rng& rng);

/// Lloyd iteration from explicit initial centers: assign every point to its
/// nearest centroid, recompute means, repeat until no assignment changes.
/// A cluster that empties is re-seeded at the point farthest from its own
/// centroid.
ClusterModel kmeans_cluster(std::span<const cplx> points, std::span<const cplx> init,
                            int max_iter = 300);

/// Best of opts.n_init runs, each seeded by kmeanspp_seed.
ClusterModel kmeans_cluster(std::span<const cplx> points, std::size_t k,
                            const KmeansOptions& opts = {});

}  // namespace apnlc
