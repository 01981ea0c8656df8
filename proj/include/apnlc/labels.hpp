#pragma once

#include <cstddef>
#include <vector>

#include "apnlc/cluster.hpp"
#include "apnlc/signal.hpp"

namespace apnlc {

struct LabelMap {
  std::vector<std::size_t> center_to_point;
  double total_cost = 0.0;
};

/// Minimum-cost square assignment (Hungarian / shortest augmenting path).
/// cost is row-major [n x n]; returns column chosen per row.
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n);

/// Bijection between cluster centers and constellation points minimizing
/// total squared distance. Requires |centers| == |points|.
LabelMap assign_labels(const ClusterModel& model, const Constellation& c);

}  // namespace apnlc
