#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "apnlc/ofdm.hpp"

namespace apnlc {

struct ErrorCount {
  std::size_t errors = 0;
  std::size_t bits = 0;
  double ber = 0.0;
  /// ber > 0.5: most likely a label inversion.
  bool saturated = false;
};

ErrorCount count_errors(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx);
inline ErrorCount count_errors(const BitStream& tx, const BitStream& rx) {
  return count_errors(std::span<const std::uint8_t>(tx.bits), std::span<const std::uint8_t>(rx.bits));
}

enum class QFlag { Ok, UpperBound, LowConfidence, PlusInfinity, MinusInfinity };
std::string_view qflag_name(QFlag f) noexcept;
QFlag parse_qflag(std::string_view s);

struct QValue {
  double q_db = 0.0;
  QFlag flag = QFlag::Ok;

  bool operator==(const QValue&) const = default;
};

/// erfc^-1 by bisection on the monotone erfc over [0, 27].
double erfc_inverse(double y);

/// 20 log10(sqrt(2) erfc^-1(2 ber)); +inf (flagged) for ber <= 0, -inf for ber >= 0.5.
QValue q_factor_from_ber(double ber);

/// Zero errors are reported at ber = 1/(2 n) with the UpperBound flag.
QValue q_factor_from_count(std::size_t errors, std::size_t bits);

/// 100 sqrt(mean |rx - ref|^2 / mean |ref|^2).
double evm_percent(const SymbolGrid& rx, const SymbolGrid& ref);
double evm_percent(std::span<const cplx> rx, std::span<const cplx> ref);

/// Rows with fewer than 1000 bits get LowConfidence unless infinite.
std::vector<QValue> per_subcarrier_q(std::span<const std::vector<std::uint8_t>> tx,
                                     std::span<const std::vector<std::uint8_t>> rx);

struct QualityReport {
  double ber = 0.0;
  QValue q;
  double evm_percent = 0.0;
  std::vector<QValue> per_subcarrier_q;
  std::vector<std::size_t> subcarrier_index;  // active-index of each per-subcarrier entry
  std::size_t bits_counted = 0;
  std::size_t bit_errors = 0;
  std::size_t ap_trimmed = 0;  // subcarriers whose AP run needed trimming

  bool operator==(const QualityReport&) const = default;
};

}  // namespace apnlc
