#pragma once

// Per-element bodies shared by the serial and OpenMP kernels.

#include <algorithm>
#include <cmath>
#include <limits>

#include "apnlc/kernels.hpp"

namespace apnlc::kernels::impl {

inline void similarity_row(std::span<const cplx> points, double preference, MatrixRef s,
                           std::size_t i) {
  for (std::size_t k = 0; k < s.n; ++k)
    s(i, k) = (i == k) ? preference : -std::norm(points[i] - points[k]);
}

/// Largest element, four interleaved partial maxima (max is exact, so the
/// grouping does not change the result).
inline double row_max(const double* v, std::size_t n) {
  constexpr double lowest = -std::numeric_limits<double>::infinity();
  double m0 = lowest, m1 = lowest, m2 = lowest, m3 = lowest;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    m0 = v[k] > m0 ? v[k] : m0;
    m1 = v[k + 1] > m1 ? v[k + 1] : m1;
    m2 = v[k + 2] > m2 ? v[k + 2] : m2;
    m3 = v[k + 3] > m3 ? v[k + 3] : m3;
  }
  for (; k < n; ++k) m0 = v[k] > m0 ? v[k] : m0;
  return std::max(std::max(m0, m1), std::max(m2, m3));
}

/// Responsibility row i: needs the largest A + S (first occurrence) and the
/// largest of the rest. `v` is scratch of length n.
inline bool responsibility_row(ConstMatrixRef s, MatrixRef r, MatrixRef a, double damping,
                               std::size_t i, double* v) {
  const std::size_t n = s.n;
  const double* srow = s.data + i * n;
  const double* arow = a.data + i * n;
  double* rrow = r.data + i * n;
  for (std::size_t k = 0; k < n; ++k) v[k] = arow[k] + srow[k];
  const double first = row_max(v, n);
  std::size_t first_k = 0;
  while (first_k < n && !(v[first_k] == first)) ++first_k;
  if (first_k == n) first_k = 0;
  v[first_k] = -std::numeric_limits<double>::infinity();
  const double second = row_max(v, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double competitor = (k == first_k) ? second : first;
    rrow[k] = damping * rrow[k] + (1.0 - damping) * (srow[k] - competitor);
  }
  return std::isfinite(first) && std::isfinite(second);
}

// Value forms of std::max(0.0, x) and std::min(0.0, x) (same results,
// including NaN and -0.0); the reference-returning std versions keep GCC
// from vectorizing.
inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }
inline double negative_part(double x) { return x < 0.0 ? x : 0.0; }

/// colsum[k] = sum over i != k of max(0, R(i,k)) for k in [k0, k1), rows
/// added in ascending order. Walks the matrix row by row.
inline void positive_column_sums(MatrixRef r, std::size_t k0, std::size_t k1, std::span<double> colsum) {
  double* sum = colsum.data();
  for (std::size_t k = k0; k < k1; ++k) sum[k] = 0.0;
  for (std::size_t i = 0; i < r.n; ++i) {
    const double* row = r.data + i * r.n;
    const std::size_t skip = std::clamp(i, k0, k1);
    for (std::size_t k = k0; k < skip; ++k) sum[k] += positive_part(row[k]);
    for (std::size_t k = (i >= k0 && i < k1) ? i + 1 : skip; k < k1; ++k) sum[k] += positive_part(row[k]);
  }
}

/// self[k] = R(k,k) + colsum[k], so availability rows read it contiguously.
inline void self_support(MatrixRef r, std::span<const double> colsum, std::span<double> self, std::size_t k0,
                         std::size_t k1) {
  for (std::size_t k = k0; k < k1; ++k) self[k] = r(k, k) + colsum[k];
}

inline void availability_row(MatrixRef r, MatrixRef a, double damping, std::span<const double> colsum,
                             std::span<const double> self, std::size_t i) {
  const double* rrow = r.data + i * r.n;
  double* arow = a.data + i * a.n;
  const double diag = damping * arow[i] + (1.0 - damping) * colsum[i];
  for (std::size_t k = 0; k < r.n; ++k)
    arow[k] = damping * arow[k] + (1.0 - damping) * negative_part(self[k] - positive_part(rrow[k]));
  arow[i] = diag;
}

inline std::size_t nearest(cplx x, std::span<const cplx> centers) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centers.size(); ++j) {
    const double d = std::norm(x - centers[j]);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

inline cplx kerr(cplx v, double phase_scale) {
  const double phi = phase_scale * std::norm(v);
  return v * cplx(std::cos(phi), std::sin(phi));
}

}  // namespace apnlc::kernels::impl
