// Serial reference kernels. Kept deliberately plain; the OpenMP versions in
// kernels_parallel.cpp are tested against these for bitwise equality.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "apnlc/kernels.hpp"
#include "kernels_impl.hpp"

namespace apnlc::kernels {

void similarity_serial(std::span<const cplx> points, double preference, MatrixRef s) {
  for (std::size_t i = 0; i < s.n; ++i) impl::similarity_row(points, preference, s, i);
}

bool ap_sweep_serial(ConstMatrixRef s, MatrixRef r, MatrixRef a, double damping,
                     std::span<double> colsum) {
  const std::size_t n = s.n;
  bool finite = true;
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) finite &= impl::responsibility_row(s, r, a, damping, i, row.data());
  const auto sums = colsum.first(n);
  const auto self = colsum.subspan(n, n);
  impl::positive_column_sums(r, 0, n, sums);
  impl::self_support(r, sums, self, 0, n);
  for (std::size_t i = 0; i < n; ++i) impl::availability_row(r, a, damping, sums, self, i);
  for (std::size_t k = 0; k < n; ++k) finite &= std::isfinite(sums[k]);
  return finite;
}

std::size_t assign_nearest_serial(std::span<const cplx> points, std::span<const cplx> centers,
                                  std::span<std::size_t> assignment) {
  std::size_t changed = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t best = impl::nearest(points[i], centers);
    if (assignment[i] != best) {
      assignment[i] = best;
      ++changed;
    }
  }
  return changed;
}

void kerr_phase_serial(std::span<cplx> field, double phase_scale) {
  for (auto& v : field) v = impl::kerr(v, phase_scale);
}

void spectral_multiply_serial(std::span<cplx> x, std::span<const cplx> h) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= h[i];
}

}  // namespace apnlc::kernels
