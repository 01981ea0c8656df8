#include "apnlc/nle_demap.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <numeric>
#include <string>

#include "apnlc/error.hpp"
#include "apnlc/rng.hpp"

namespace apnlc {
namespace {

// Keep the k most populated clusters of an oversized model and hand every
// point to the nearest survivor.
ClusterModel trim_to(ClusterModel model, std::span<const cplx> points, std::size_t k) {
  std::vector<std::size_t> sizes(model.centers.size(), 0);
  for (auto a : model.assignment) ++sizes[a];
  std::vector<std::size_t> order(model.centers.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sizes[x] > sizes[y]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  std::vector<cplx> kept;
  for (auto c : order) kept.push_back(model.centers[c]);
  model.centers = std::move(kept);
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      const double d = std::norm(points[i] - model.centers[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    model.assignment[i] = best;
  }
  model.objective = sum_squared_error(points, model);
  return model;
}

}  // namespace

ClusterModel cluster_points(std::span<const cplx> points, ClusterMethod method, std::size_t k,
                            const NleOptions& opts, std::uint64_t seed, bool* trimmed) {
  if (trimmed) *trimmed = false;
  switch (method) {
    case ClusterMethod::AP: {
      ApSearch search = ap_search(points, k, opts.ap);
      if (search.target_met) return std::move(search.model);
      if (search.above) {
        if (trimmed) *trimmed = true;
        return trim_to(std::move(*search.above), points, k);
      }
      fail(ErrorCode::ClusterFailure,
           "AP could not reach " + std::to_string(k) + " exemplars (nearest below: " +
               std::to_string(search.nearest_below) + ")");
    }
    case ClusterMethod::KMEANS: {
      KmeansOptions ko = opts.kmeans;
      ko.seed = seed;
      return kmeans_cluster(points, k, ko);
    }
    case ClusterMethod::FCM: {
      FcmOptions fo = opts.fcm;
      fo.seed = seed;
      return fcm_cluster(points, k, fo);
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown clustering method");
}

NleResult nle_demap(const SymbolGrid& grid, ClusterMethod method, const Constellation& c,
                    const NleOptions& opts) {
  require(!grid.empty(), ErrorCode::EmptyRequest, "nle_demap: empty grid");
  const std::size_t k = c.size();
  const std::size_t support = k * opts.min_support_per_point;
  require(grid.n_symbols() >= support, ErrorCode::InsufficientSupport,
          "nle_demap: " + std::to_string(grid.n_symbols()) + " points per subcarrier, need " +
              std::to_string(support));

  const std::size_t rows = grid.n_subcarriers();
  NleResult out;
  out.decided = SymbolGrid(rows, grid.n_symbols());
  out.bits.resize(rows);
  out.iterations.assign(rows, 0);
  std::vector<char> trimmed(rows, 0);
  std::vector<std::exception_ptr> errors(rows);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t rr = 0; rr < static_cast<std::ptrdiff_t>(rows); ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    try {
      const auto points = grid.row(r);
      bool was_trimmed = false;
      const ClusterModel model =
          cluster_points(points, method, k, opts, derive_seed(opts.seed, r), &was_trimmed);
      const LabelMap labels = assign_labels(model, c);
      auto decided = out.decided.row(r);
      auto& bits = out.bits[r];
      bits.clear();
      bits.reserve(points.size() * static_cast<std::size_t>(c.bits_per_symbol));
      for (std::size_t t = 0; t < points.size(); ++t) {
        const std::size_t point = labels.center_to_point[model.assignment[t]];
        decided[t] = c.points[point];
        append_label_bits(point, c, bits);
      }
      out.iterations[r] = model.n_iterations;
      trimmed[r] = was_trimmed ? 1 : 0;
    } catch (...) {
      errors[r] = std::current_exception();
    }
  }

  for (std::size_t r = 0; r < rows; ++r) {
    if (!errors[r]) continue;
    try {
      std::rethrow_exception(errors[r]);
    } catch (const Error& e) {
      throw Error(e.code(), "subcarrier " + std::to_string(r) + ": " + e.what());
    }
  }
  for (std::size_t r = 0; r < rows; ++r)
    if (trimmed[r]) out.ap_trimmed_rows.push_back(r);
  return out;
}

}  // namespace apnlc
