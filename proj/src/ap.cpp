#include "apnlc/ap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "apnlc/error.hpp"
#include "apnlc/kernels.hpp"
#include "apnlc/rng.hpp"

namespace apnlc {

void SimilarityMatrix::set_preference(double p) {
  preference_ = p;
  for (std::size_t i = 0; i < n_; ++i) s_[i * n_ + i] = p;
}

double SimilarityMatrix::min_offdiag() const noexcept {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k)
      if (i != k) m = std::min(m, s_[i * n_ + k]);
  return m;
}

double SimilarityMatrix::max_offdiag() const noexcept {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k)
      if (i != k) m = std::max(m, s_[i * n_ + k]);
  return m;
}

SimilarityMatrix similarity_matrix(std::span<const cplx> points, double preference) {
  require(points.size() >= 2, ErrorCode::InvalidArgument,
          "similarity_matrix: need at least two points");
  const std::size_t n = points.size();
  std::vector<double> s(n * n);
  kernels::similarity_parallel(points, preference, {s.data(), n});
  return {n, std::move(s), preference};
}

SimilarityMatrix similarity_matrix(std::span<const cplx> points, MedianPreference) {
  SimilarityMatrix sm = similarity_matrix(points, 0.0);
  const std::size_t n = sm.size();
  std::vector<double> off;
  off.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (i != k) off.push_back(sm(i, k));
  const std::size_t mid = off.size() / 2;
  std::nth_element(off.begin(), off.begin() + static_cast<std::ptrdiff_t>(mid), off.end());
  double median = off[mid];
  if (off.size() % 2 == 0) {
    const double lower = *std::max_element(off.begin(), off.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (lower + median);
  }
  sm.set_preference(median);
  return sm;
}

std::vector<std::size_t> ApState::exemplars() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < n; ++k)
    if (R(k, k) + A(k, k) > 0.0) out.push_back(k);
  return out;
}

void ap_iterate(ApState& state, const SimilarityMatrix& s, KernelMode mode) {
  require(state.n == s.size() && state.r.size() == s.size() * s.size() &&
              state.a.size() == state.r.size(),
          ErrorCode::DimensionMismatch, "ap_iterate: state and similarity sizes differ");
  std::vector<double> colsum(2 * state.n);
  const kernels::ConstMatrixRef sref{s.values().data(), s.size()};
  const kernels::MatrixRef r{state.r.data(), state.n};
  const kernels::MatrixRef a{state.a.data(), state.n};
  const bool finite = mode == KernelMode::Parallel
                          ? kernels::ap_sweep_parallel(sref, r, a, state.damping, colsum)
                          : kernels::ap_sweep_serial(sref, r, a, state.damping, colsum);
  require(finite, ErrorCode::NumericalFailure, "ap_iterate: non-finite message");
  ++state.iteration;
}

bool ap_converged(std::span<const std::vector<std::size_t>> history, std::size_t window) {
  if (window == 0 || history.size() < window) return false;
  const auto& last = history.back();
  for (std::size_t i = history.size() - window; i < history.size(); ++i)
    if (history[i] != last) return false;
  return true;
}

std::vector<std::size_t> uniform_subsample(std::size_t n, std::size_t m) {
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i * n / m;
  return idx;
}

namespace {

struct ApRun {
  std::vector<std::size_t> exemplars;  // indices into the message-passing set
  int iterations = 0;
  bool converged = false;
};

ApRun run_messages(const SimilarityMatrix& s, const ApOptions& opts, ApState& state,
                   int max_iter) {
  std::fill(state.r.begin(), state.r.end(), 0.0);
  std::fill(state.a.begin(), state.a.end(), 0.0);
  state.iteration = 0;
  state.damping = opts.damping;

  ApRun run;
  std::vector<std::size_t> previous;
  int stable = 0;
  for (int it = 0; it < max_iter; ++it) {
    ap_iterate(state, s, opts.kernel);
    auto current = state.exemplars();
    if (!current.empty() && current == previous) {
      ++stable;
    } else {
      stable = current.empty() ? 0 : 1;
    }
    previous = std::move(current);
    if (stable >= opts.window) {
      run.converged = true;
      break;
    }
  }
  run.exemplars = std::move(previous);
  run.iterations = state.iteration;
  return run;
}

struct Prepared {
  std::vector<cplx> subset;
  std::vector<std::size_t> origin;  // subset index -> input index
};

Prepared prepare(std::span<const cplx> points, const ApOptions& opts) {
  Prepared p;
  if (points.size() > opts.max_points) {
    p.origin = uniform_subsample(points.size(), opts.max_points);
  } else {
    p.origin.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) p.origin[i] = i;
  }
  p.subset.reserve(p.origin.size());
  for (auto i : p.origin) p.subset.push_back(points[i]);
  return p;
}

ClusterModel build_model(std::span<const cplx> points, const Prepared& prep,
                         const SimilarityMatrix& s, const ApRun& run) {
  ClusterModel m;
  m.method = ClusterMethod::AP;
  m.n_iterations = run.iterations;
  m.converged = run.converged;
  std::vector<std::size_t> owner(points.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t c = 0; c < run.exemplars.size(); ++c) {
    m.centers.push_back(prep.subset[run.exemplars[c]]);
    owner[prep.origin[run.exemplars[c]]] = c;
  }
  m.assignment.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (owner[i] != std::numeric_limits<std::size_t>::max()) {
      m.assignment[i] = owner[i];
      continue;
    }
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < m.centers.size(); ++c) {
      const double d = std::norm(points[i] - m.centers[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    m.assignment[i] = best;
  }
  // Net similarity over the message-passing set.
  double net = 0.0;
  for (std::size_t j = 0; j < prep.subset.size(); ++j) {
    const std::size_t c = m.assignment[prep.origin[j]];
    const std::size_t ex = run.exemplars[c];
    net += s(j, ex);
  }
  m.objective = net;
  return m;
}

SimilarityMatrix prepared_similarity(const Prepared& prep, const ApOptions& opts) {
  SimilarityMatrix s = opts.preference ? similarity_matrix(prep.subset, *opts.preference)
                                       : similarity_matrix(prep.subset, MedianPreference{});
  if (opts.tie_noise <= 0.0) return s;
  // Exact ties (duplicate points, mirror-symmetric clouds) keep the messages
  // of tied candidates equal forever, so they become exemplars together or
  // not at all.
  const std::size_t n = s.size();
  const double spread = std::max(std::abs(s.min_offdiag()), std::abs(s.max_offdiag()));
  const double scale = opts.tie_noise * (spread > 0.0 ? spread : 1.0);
  std::vector<double> v = s.values();
  Rng rng(0x5449455345454431ULL);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (i != k) v[i * n + k] -= scale * rng.uniform();
  return SimilarityMatrix(n, std::move(v), s.preference());
}

// Retry with heavier damping until the exemplar set settles.
ApRun run_escalating(const SimilarityMatrix& s, const ApOptions& opts, ApState& state, int& runs) {
  ApOptions o = opts;
  for (int e = 0;; ++e) {
    const bool last = e >= opts.damping_escalations;
    const ApRun run =
        run_messages(s, o, state, last ? opts.max_iter : std::min(opts.max_iter, opts.escalate_after));
    ++runs;
    if (run.converged || last) return run;
    o.damping = 1.0 - 0.25 * (1.0 - o.damping);
  }
}

}  // namespace

ClusterModel ap_cluster(std::span<const cplx> points, const ApOptions& opts) {
  const Prepared prep = prepare(points, opts);
  const SimilarityMatrix s = prepared_similarity(prep, opts);
  ApState state(s.size(), opts.damping);
  int runs = 0;
  const ApRun run = run_escalating(s, opts, state, runs);
  require(!run.exemplars.empty(), ErrorCode::ClusterFailure, "ap_cluster: no exemplar emerged");
  return build_model(points, prep, s, run);
}

ApSearch ap_search(std::span<const cplx> points, std::size_t target_k, const ApOptions& opts) {
  require(target_k >= 1 && points.size() >= target_k, ErrorCode::InvalidArgument,
          "ap_cluster: target count must be in [1, N]");
  const Prepared prep = prepare(points, opts);
  require(prep.subset.size() >= target_k, ErrorCode::InvalidArgument,
          "ap_cluster: subsample smaller than target count");
  SimilarityMatrix s = prepared_similarity(prep, opts);
  ApState state(s.size(), opts.damping);

  ApSearch out;
  std::optional<ClusterModel> below_model;
  std::vector<std::pair<double, std::size_t>> seen;  // (preference, count) with count > 0
  bool unstable = false;
  auto evaluate = [&](double pref) -> std::size_t {
    s.set_preference(pref);
    const ApRun run = run_escalating(s, opts, state, out.runs);
    const std::size_t count = run.exemplars.size();
    // The count cannot grow as the preference falls. When it does, the
    // preference is so low that every availability sinks to about p/2,
    // all responsibilities turn positive together and the messages swing
    // between no exemplars and all of them.
    unstable = count > 0 && std::any_of(seen.begin(), seen.end(), [&](const auto& e) {
                 return e.first > pref && e.second < count;
               });
    if (unstable) return count;
    if (count > 0) seen.emplace_back(pref, count);
    if (count == 0) return 0;
    ClusterModel model = build_model(points, prep, s, run);
    if (count == target_k) {
      out.model = std::move(model);
      out.target_met = true;
      out.preference = pref;
    } else if (count < target_k) {
      if (count >= out.nearest_below) {
        out.nearest_below = count;
        below_model = std::move(model);
      }
    } else if (out.nearest_above == 0 || count <= out.nearest_above) {
      out.nearest_above = count;
      out.above = std::move(model);
      out.preference = pref;
    }
    return count;
  };

  double pref = s.preference();
  std::size_t count = evaluate(pref);
  if (out.target_met) return out;

  // Exemplar count grows with the preference.
  double lo = static_cast<double>(s.size()) * s.min_offdiag();
  double hi = s.max_offdiag();
  if (count > target_k && pref < hi) hi = pref;
  if (count < target_k && pref > lo) lo = pref;
  for (int step = 0; step < opts.bisection_steps && lo < hi; ++step) {
    pref = 0.5 * (lo + hi);
    count = evaluate(pref);
    if (out.target_met) return out;
    if (unstable || count < target_k) lo = pref; else hi = pref;
  }
  if (out.above) out.model = *out.above;
  else if (below_model) out.model = std::move(*below_model);
  return out;
}

ClusterModel ap_cluster(std::span<const cplx> points, std::size_t target_k, const ApOptions& opts) {
  ApSearch search = ap_search(points, target_k, opts);
  if (!search.target_met)
    fail(ErrorCode::ClusterFailure,
         "ap_cluster: could not reach " + std::to_string(target_k) +
             " exemplars; nearest achievable counts " + std::to_string(search.nearest_below) +
             " and " + std::to_string(search.nearest_above));
  return std::move(search.model);
}

}  // namespace apnlc
