#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "apnlc/cluster.hpp"

namespace apnlc {

/// Dense similarity matrix; s(i,k) = -|x_i - x_k|^2, diagonal = preference.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::size_t n, std::vector<double> values, double preference)
      : n_(n), s_(std::move(values)), preference_(preference) {}

  std::size_t size() const noexcept { return n_; }
  double preference() const noexcept { return preference_; }
  double operator()(std::size_t i, std::size_t k) const noexcept { return s_[i * n_ + k]; }
  const std::vector<double>& values() const noexcept { return s_; }

  /// Rewrite the diagonal.
  void set_preference(double p);
  /// Smallest / largest off-diagonal entry.
  double min_offdiag() const noexcept;
  double max_offdiag() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<double> s_;
  double preference_ = 0.0;
};

/// Median of the N(N-1) off-diagonal similarities (mean of the two middle
/// values when the count is even).
struct MedianPreference {};

SimilarityMatrix similarity_matrix(std::span<const cplx> points, double preference);
SimilarityMatrix similarity_matrix(std::span<const cplx> points, MedianPreference);

/// Responsibility / availability tables, both zero at start.
struct ApState {
  std::size_t n = 0;
  std::vector<double> r;
  std::vector<double> a;
  int iteration = 0;
  double damping = 0.5;

  ApState() = default;
  ApState(std::size_t n_points, double damping_factor)
      : n(n_points), r(n_points * n_points, 0.0), a(n_points * n_points, 0.0),
        damping(damping_factor) {}

  double R(std::size_t i, std::size_t k) const noexcept { return r[i * n + k]; }
  double A(std::size_t i, std::size_t k) const noexcept { return a[i * n + k]; }

  /// {k : R(k,k) + A(k,k) > 0}, ascending.
  std::vector<std::size_t> exemplars() const;
};

enum class KernelMode { Parallel, Serial };

/// One sweep:
///   R(i,k) <- s(i,k) - max_{k' != k} [A(i,k') + s(i,k')]
///   A(i,k) <- min(0, R(k,k) + sum_{i' not in {i,k}} max(0, R(i',k)))   (i != k)
///   A(k,k) <- sum_{i' != k} max(0, R(i',k))
/// each damped as new = damping * old + (1 - damping) * computed, with the
/// availability update using the damped responsibilities.
void ap_iterate(ApState& state, const SimilarityMatrix& s, KernelMode mode = KernelMode::Parallel);

/// True iff the last `window` exemplar sets are identical.
bool ap_converged(std::span<const std::vector<std::size_t>> history, std::size_t window);

struct ApOptions {
  double damping = 0.5;
  int max_iter = 1000;
  int window = 15;
  /// Uniform preference; median of the similarities when unset.
  std::optional<double> preference;
  /// Inputs larger than this are uniformly subsampled before message passing.
  std::size_t max_points = 2000;
  int bisection_steps = 30;
  /// A run that does not converge is repeated with 1 - damping cut to a
  /// quarter, at most this many times (0.5 -> 0.875 -> 0.96875).
  int damping_escalations = 2;
  /// Sweeps allowed before an attempt that still has escalations left is
  /// abandoned; the last attempt runs to max_iter.
  int escalate_after = 200;
  /// Off-diagonal similarities are lowered by a fixed pseudo-random amount of
  /// up to this fraction of the largest |s| to break exact ties. 0 disables.
  double tie_noise = 1e-9;
  KernelMode kernel = KernelMode::Parallel;
};

/// Result of a preference search for a fixed cluster count.
struct ApSearch {
  ClusterModel model;            // closest achieved count (exact when target met)
  bool target_met = false;
  std::size_t nearest_below = 0; // largest count seen below target (0 if none)
  std::size_t nearest_above = 0; // smallest count seen above target (0 if none)
  std::optional<ClusterModel> above;  // model for nearest_above
  double preference = 0.0;
  int runs = 0;
};

/// Free-running AP (no target count). Exemplars are points with
/// R(k,k) + A(k,k) > 0 at convergence; every point goes to its most similar
/// exemplar. Throws ClusterFailure if no exemplar emerges.
ClusterModel ap_cluster(std::span<const cplx> points, const ApOptions& opts = {});

/// AP constrained to `target_k` exemplars by bisecting a uniform preference
/// in [N min(s), max(s)]. Throws ClusterFailure naming the nearest counts
/// when the target cannot be hit.
ClusterModel ap_cluster(std::span<const cplx> points, std::size_t target_k,
                        const ApOptions& opts = {});

/// Same search, reporting instead of throwing.
ApSearch ap_search(std::span<const cplx> points, std::size_t target_k, const ApOptions& opts = {});

/// Indices of a uniform stride subsample of size m from n (m < n).
std::vector<std::size_t> uniform_subsample(std::size_t n, std::size_t m);

}  // namespace apnlc
