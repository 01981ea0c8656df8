#pragma once

// Hot loops of the clustering and propagation code, each in two forms: a
// plain serial reference and an OpenMP version. Both forms perform the same
// floating-point operations in the same order per output element, so their
// results are bitwise identical regardless of thread count.

#include <cstddef>
#include <span>

#include "apnlc/fft.hpp"

namespace apnlc::kernels {

/// Row-major n x n view.
struct MatrixRef {
  double* data;
  std::size_t n;
  double& operator()(std::size_t i, std::size_t k) const noexcept { return data[i * n + k]; }
};

struct ConstMatrixRef {
  const double* data;
  std::size_t n;
  double operator()(std::size_t i, std::size_t k) const noexcept { return data[i * n + k]; }
};

/// s(i,k) = -|x_i - x_k|^2 off the diagonal, `preference` on it.
void similarity_serial(std::span<const cplx> points, double preference, MatrixRef s);
void similarity_parallel(std::span<const cplx> points, double preference, MatrixRef s);

/// One damped responsibility + availability sweep. `colsum` is scratch of
/// length 2n. Returns false if a non-finite value was produced.
bool ap_sweep_serial(ConstMatrixRef s, MatrixRef r, MatrixRef a, double damping,
                     std::span<double> colsum);
bool ap_sweep_parallel(ConstMatrixRef s, MatrixRef r, MatrixRef a, double damping,
                       std::span<double> colsum);

/// Nearest-centroid assignment (ties to lowest index). Returns how many
/// assignments changed.
std::size_t assign_nearest_serial(std::span<const cplx> points, std::span<const cplx> centers,
                                  std::span<std::size_t> assignment);
std::size_t assign_nearest_parallel(std::span<const cplx> points, std::span<const cplx> centers,
                                    std::span<std::size_t> assignment);

/// a *= exp(j phase_scale |a|^2).
void kerr_phase_serial(std::span<cplx> field, double phase_scale);
void kerr_phase_parallel(std::span<cplx> field, double phase_scale);

/// x *= h elementwise.
void spectral_multiply_serial(std::span<cplx> x, std::span<const cplx> h);
void spectral_multiply_parallel(std::span<cplx> x, std::span<const cplx> h);

}  // namespace apnlc::kernels
