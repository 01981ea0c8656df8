#include "apnlc/kmeans.hpp"

#include <algorithm>
#include <limits>

#include "apnlc/error.hpp"
#include "apnlc/kernels.hpp"
#include "apnlc/rng.hpp"

namespace apnlc {

std::vector<cplx> kmeanspp_seed(std::span<const cplx> points, std::size_t k, Rng& rng) {
  const std::size_t n = points.size();
  require(k >= 1 && k <= n, ErrorCode::InvalidArgument, "kmeans: k must be in [1, N]");
  std::vector<cplx> seeds;
  std::vector<bool> used(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t pick = static_cast<std::size_t>(rng.below(n));
  for (;;) {
    used[pick] = true;
    seeds.push_back(points[pick]);
    if (seeds.size() == k) break;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], std::norm(points[i] - points[pick]));
      if (!used[i]) total += d2[i];
    }
    if (total > 0.0) {
      double u = rng.uniform() * total;
      pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (used[i] || d2[i] == 0.0) continue;
        pick = i;
        u -= d2[i];
        if (u < 0.0) break;
      }
    } else {
      std::size_t r = static_cast<std::size_t>(rng.below(n - seeds.size()));
      for (pick = 0; used[pick] || r-- > 0; ++pick) {
      }
    }
  }
  return seeds;
}

ClusterModel kmeans_cluster(std::span<const cplx> points, std::span<const cplx> init,
                            int max_iter) {
  const std::size_t n = points.size();
  const std::size_t k = init.size();
  require(k >= 1, ErrorCode::InvalidArgument, "kmeans: k must be >= 1");
  require(k <= n, ErrorCode::InvalidArgument, "kmeans: k exceeds the number of points");
  require(max_iter >= 1, ErrorCode::InvalidArgument, "kmeans: max_iter must be >= 1");

  ClusterModel m;
  m.method = ClusterMethod::KMEANS;
  m.centers.assign(init.begin(), init.end());
  m.assignment.assign(n, std::numeric_limits<std::size_t>::max());

  std::vector<cplx> sums(k);
  std::vector<std::size_t> counts(k);
  for (;;) {
    const std::size_t changed = kernels::assign_nearest_parallel(points, m.centers, m.assignment);
    if (m.n_iterations > 0 && changed == 0) {
      m.converged = true;
      break;
    }
    if (m.n_iterations >= max_iter) break;

    std::fill(counts.begin(), counts.end(), 0);
    for (auto a : m.assignment) ++counts[a];
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] != 0) continue;
      // Re-seed an empty cluster at the point farthest from its centroid.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[m.assignment[i]] <= 1) continue;
        const double d = std::norm(points[i] - m.centers[m.assignment[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far_d < 0.0) continue;
      --counts[m.assignment[far]];
      m.assignment[far] = j;
      counts[j] = 1;
      m.centers[j] = points[far];
    }

    std::fill(sums.begin(), sums.end(), cplx{});
    for (std::size_t i = 0; i < n; ++i) sums[m.assignment[i]] += points[i];
    for (std::size_t j = 0; j < k; ++j)
      if (counts[j] > 0) m.centers[j] = sums[j] / static_cast<double>(counts[j]);
    ++m.n_iterations;
  }
  m.objective = sum_squared_error(points, m);
  return m;
}

ClusterModel kmeans_cluster(std::span<const cplx> points, std::size_t k, const KmeansOptions& opts) {
  const std::size_t n = points.size();
  require(k >= 1, ErrorCode::InvalidArgument, "kmeans: k must be >= 1");
  require(k <= n, ErrorCode::InvalidArgument, "kmeans: k exceeds the number of points");
  require(opts.n_init >= 1, ErrorCode::InvalidArgument, "kmeans: n_init must be >= 1");

  ClusterModel best;
  bool have_best = false;
  for (int run = 0; run < opts.n_init; ++run) {
    Rng rng(derive_seed(opts.seed, 0x6b6d65616e73ull, static_cast<std::uint64_t>(run)));
    const std::vector<cplx> init = kmeanspp_seed(points, k, rng);
    ClusterModel m = kmeans_cluster(points, init, opts.max_iter);
    if (!have_best || m.objective < best.objective) {
      best = std::move(m);
      have_best = true;
    }
  }
  return best;
}

}  // namespace apnlc
