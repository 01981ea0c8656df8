#include <algorithm>
#include <cmath>
#include <vector>

#include <omp.h>

#include "apnlc/kernels.hpp"
#include "kernels_impl.hpp"

namespace apnlc::kernels {
namespace {

// Below this many elements the threading overhead dominates.
constexpr std::size_t kMinParallelWork = 1u << 14;
constexpr std::ptrdiff_t kColumnBlock = 256;

}  // namespace

void similarity_parallel(std::span<const cplx> points, double preference, MatrixRef s) {
  const auto n = static_cast<std::ptrdiff_t>(s.n);
#pragma omp parallel for schedule(static) if (s.n * s.n >= kMinParallelWork)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    impl::similarity_row(points, preference, s, static_cast<std::size_t>(i));
}

bool ap_sweep_parallel(ConstMatrixRef s, MatrixRef r, MatrixRef a, double damping,
                       std::span<double> colsum) {
  // Nested inside another parallel region (per-subcarrier clustering) or
  // on one thread the team would be a single thread anyway.
  if (s.n * s.n < kMinParallelWork || omp_in_parallel() || omp_get_max_threads() == 1)
    return ap_sweep_serial(s, r, a, damping, colsum);
  const auto n = static_cast<std::ptrdiff_t>(s.n);
  const auto sums = colsum.first(s.n);
  const auto self = colsum.subspan(s.n, s.n);
  bool finite = true;
#pragma omp parallel
  {
    std::vector<double> row(s.n);
#pragma omp for schedule(static) reduction(&& : finite)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      finite = impl::responsibility_row(s, r, a, damping, static_cast<std::size_t>(i), row.data()) && finite;
    // Each block of column sums is owned by one thread and accumulated in
    // row order, matching the serial kernel exactly.
    const std::ptrdiff_t blocks = (n + kColumnBlock - 1) / kColumnBlock;
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
      const auto k0 = static_cast<std::size_t>(b * kColumnBlock);
      const std::size_t k1 = std::min(s.n, k0 + kColumnBlock);
      impl::positive_column_sums(r, k0, k1, sums);
      impl::self_support(r, sums, self, k0, k1);
    }
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      impl::availability_row(r, a, damping, sums, self, static_cast<std::size_t>(i));
  }
  for (std::size_t k = 0; k < s.n; ++k) finite = finite && std::isfinite(sums[k]);
  return finite;
}

std::size_t assign_nearest_parallel(std::span<const cplx> points, std::span<const cplx> centers,
                                    std::span<std::size_t> assignment) {
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  std::size_t changed = 0;
#pragma omp parallel for schedule(static) reduction(+ : changed) \
    if (points.size() * centers.size() >= kMinParallelWork)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const std::size_t best = impl::nearest(points[idx], centers);
    if (assignment[idx] != best) {
      assignment[idx] = best;
      ++changed;
    }
  }
  return changed;
}

void kerr_phase_parallel(std::span<cplx> field, double phase_scale) {
  const auto n = static_cast<std::ptrdiff_t>(field.size());
#pragma omp parallel for schedule(static) if (field.size() >= kMinParallelWork)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    field[static_cast<std::size_t>(i)] = impl::kerr(field[static_cast<std::size_t>(i)], phase_scale);
}

void spectral_multiply_parallel(std::span<cplx> x, std::span<const cplx> h) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (x.size() >= kMinParallelWork)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    x[static_cast<std::size_t>(i)] *= h[static_cast<std::size_t>(i)];
}

}  // namespace apnlc::kernels
