#pragma once

#include <cstdint>
#include <vector>

#include "apnlc/ap.hpp"
#include "apnlc/fcm.hpp"
#include "apnlc/kmeans.hpp"
#include "apnlc/labels.hpp"
#include "apnlc/ofdm.hpp"

namespace apnlc {

struct NleOptions {
  ApOptions ap;
  KmeansOptions kmeans;
  FcmOptions fcm;
  std::uint64_t seed = 1;
  /// Minimum points per cluster per subcarrier.
  std::size_t min_support_per_point = 5;
};

struct NleResult {
  SymbolGrid decided;                            // same shape as the input
  std::vector<std::vector<std::uint8_t>> bits;   // per row, labels in column order
  std::vector<int> iterations;                   // per row
  /// Rows where AP could not hit |constellation| exemplars exactly and the
  /// nearest larger exemplar set was trimmed to its largest clusters.
  std::vector<std::size_t> ap_trimmed_rows;
};

/// Blind per-row decisions: each row (one subcarrier's symbols across all
/// OFDM symbols and frames) is clustered into |c| groups, the clusters are
/// labeled by assign_labels, and every symbol is replaced by its cluster's
/// ideal point. Rows are independent and processed in parallel.
NleResult nle_demap(const SymbolGrid& grid, ClusterMethod method, const Constellation& c,
                    const NleOptions& opts = {});

/// Cluster one row; exposed for the CLI and tests.
ClusterModel cluster_points(std::span<const cplx> points, ClusterMethod method, std::size_t k,
                            const NleOptions& opts, std::uint64_t seed,
                            bool* trimmed = nullptr);

}  // namespace apnlc
