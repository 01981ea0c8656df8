#include "apnlc/fcm.hpp"

#include <cmath>
#include <limits>

#include "apnlc/error.hpp"
#include "apnlc/kmeans.hpp"
#include "apnlc/rng.hpp"

namespace apnlc {

namespace {

double power(double x, double e) {
  if (e == 1.0) return x;
  if (e == -1.0) return 1.0 / x;
  if (e == 2.0) return x * x;
  return std::pow(x, e);
}

void update_centers(std::span<const cplx> points, std::span<const double> mu, double m,
                    std::vector<cplx>& centers) {
  const std::size_t k = centers.size();
  std::vector<cplx> num(k);
  std::vector<double> den(k, 0.0);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double w = power(mu[i * k + j], m);
      num[j] += w * points[i];
      den[j] += w;
    }
  for (std::size_t j = 0; j < k; ++j)
    if (den[j] > 0.0) centers[j] = num[j] / den[j];
}

void update_memberships(std::span<const cplx> points, std::span<const cplx> centers, double m,
                        std::vector<double>& mu) {
  const std::size_t k = centers.size();
  const double expo = 1.0 / (m - 1.0);  // (|.|/|.|)^(2/(m-1)) on squared distances
  std::vector<double> d(k);
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t coincident = k;
    for (std::size_t j = 0; j < k; ++j) {
      d[j] = std::norm(points[i] - centers[j]);
      if (d[j] == 0.0 && coincident == k) coincident = j;
    }
    double* row = mu.data() + i * k;
    if (coincident < k) {
      for (std::size_t j = 0; j < k; ++j) row[j] = (j == coincident) ? 1.0 : 0.0;
      continue;
    }
    // sum_l (d_j / d_l)^e = d_j^e * sum_l d_l^-e
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) total += (row[j] = power(d[j], -expo));
    for (std::size_t j = 0; j < k; ++j) row[j] /= total;
  }
}

}  // namespace

double fcm_objective(std::span<const cplx> points, std::span<const cplx> centers,
                     std::span<const double> membership, double m) {
  const std::size_t k = centers.size();
  double f = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < k; ++j)
      f += power(membership[i * k + j], m) * std::norm(points[i] - centers[j]);
  return f;
}

FcmResult fcm_run(std::span<const cplx> points, std::size_t k, const FcmOptions& opts) {
  const std::size_t n = points.size();
  require(opts.m > 1.0, ErrorCode::InvalidArgument, "fcm: fuzziness exponent must be > 1");
  require(k >= 1 && k <= n, ErrorCode::InvalidArgument, "fcm: k must be in [1, N]");
  require(opts.max_iter >= 1, ErrorCode::InvalidArgument, "fcm: max_iter must be >= 1");

  FcmResult res;
  ClusterModel& model = res.model;
  model.method = ClusterMethod::FCM;
  model.centers.assign(k, cplx{});
  model.membership.assign(n * k, 0.0);

  // Start from spread-out seed centers; uniform random memberships put every
  // initial center near the global mean.
  Rng rng(derive_seed(opts.seed, 0x66636dull));
  model.centers = kmeanspp_seed(points, k, rng);
  update_memberships(points, model.centers, opts.m, model.membership);

  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iter; ++it) {
    update_centers(points, model.membership, opts.m, model.centers);
    update_memberships(points, model.centers, opts.m, model.membership);
    const double f = fcm_objective(points, model.centers, model.membership, opts.m);
    require(std::isfinite(f), ErrorCode::NumericalFailure, "fcm: non-finite objective");
    if (opts.keep_history) res.objective_history.push_back(f);
    model.objective = f;
    model.n_iterations = it + 1;
    if (std::abs(f - previous) < opts.tol) {
      model.converged = true;
      break;
    }
    previous = f;
  }

  model.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < k; ++j)
      if (model.membership[i * k + j] > model.membership[i * k + best]) best = j;
    model.assignment[i] = best;
  }
  return res;
}

}  // namespace apnlc
