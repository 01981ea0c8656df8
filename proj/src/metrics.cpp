#include "apnlc/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "apnlc/error.hpp"

namespace apnlc {

ErrorCount count_errors(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx) {
  require(tx.size() == rx.size(), ErrorCode::LengthMismatch,
          "count_errors: " + std::to_string(tx.size()) + " vs " + std::to_string(rx.size()) + " bits");
  ErrorCount c;
  c.bits = tx.size();
  for (std::size_t i = 0; i < tx.size(); ++i) c.errors += ((tx[i] ^ rx[i]) & 1u);
  c.ber = c.bits ? static_cast<double>(c.errors) / static_cast<double>(c.bits) : 0.0;
  c.saturated = c.ber > 0.5;
  return c;
}

std::string_view qflag_name(QFlag f) noexcept {
  switch (f) {
    case QFlag::Ok: return "ok";
    case QFlag::UpperBound: return "upper_bound";
    case QFlag::LowConfidence: return "low_confidence";
    case QFlag::PlusInfinity: return "plus_inf";
    case QFlag::MinusInfinity: return "minus_inf";
  }
  return "ok";
}

QFlag parse_qflag(std::string_view s) {
  for (QFlag f : {QFlag::Ok, QFlag::UpperBound, QFlag::LowConfidence, QFlag::PlusInfinity,
                  QFlag::MinusInfinity})
    if (qflag_name(f) == s) return f;
  fail(ErrorCode::InvalidArgument, "unknown q flag '" + std::string(s) + "'");
}

double erfc_inverse(double y) {
  require(y > 0.0 && y < 2.0, ErrorCode::InvalidArgument, "erfc_inverse: argument outside (0, 2)");
  if (y == 1.0) return 0.0;
  if (y > 1.0) return -erfc_inverse(2.0 - y);
  double lo = 0.0, hi = 27.0;  // erfc(27) underflows to ~5e-319
  for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::erfc(mid) > y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

QValue q_factor_from_ber(double ber) {
  require(!std::isnan(ber), ErrorCode::InvalidArgument, "q_factor_from_ber: NaN");
  if (ber <= 0.0) return {std::numeric_limits<double>::infinity(), QFlag::PlusInfinity};
  if (ber >= 0.5) return {-std::numeric_limits<double>::infinity(), QFlag::MinusInfinity};
  return {20.0 * std::log10(std::sqrt(2.0) * erfc_inverse(2.0 * ber)), QFlag::Ok};
}

QValue q_factor_from_count(std::size_t errors, std::size_t bits) {
  require(bits > 0, ErrorCode::EmptyRequest, "q_factor_from_count: no bits counted");
  if (errors == 0) {
    QValue q = q_factor_from_ber(0.5 / static_cast<double>(bits));
    q.flag = QFlag::UpperBound;
    return q;
  }
  return q_factor_from_ber(static_cast<double>(errors) / static_cast<double>(bits));
}

double evm_percent(std::span<const cplx> rx, std::span<const cplx> ref) {
  require(rx.size() == ref.size(), ErrorCode::DimensionMismatch, "evm: size mismatch");
  require(!ref.empty(), ErrorCode::EmptyRequest, "evm: empty input");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    num += std::norm(rx[i] - ref[i]);
    den += std::norm(ref[i]);
  }
  require(den > 0.0, ErrorCode::ZeroPower, "evm: reference has zero energy");
  return 100.0 * std::sqrt(num / den);
}

double evm_percent(const SymbolGrid& rx, const SymbolGrid& ref) {
  require(rx.n_subcarriers() == ref.n_subcarriers() && rx.n_symbols() == ref.n_symbols(),
          ErrorCode::DimensionMismatch, "evm: grid dimensions differ");
  return evm_percent(std::span<const cplx>(rx.values()), std::span<const cplx>(ref.values()));
}

std::vector<QValue> per_subcarrier_q(std::span<const std::vector<std::uint8_t>> tx,
                                     std::span<const std::vector<std::uint8_t>> rx) {
  require(tx.size() == rx.size(), ErrorCode::DimensionMismatch, "per_subcarrier_q: row count mismatch");
  std::vector<QValue> out;
  out.reserve(tx.size());
  for (std::size_t r = 0; r < tx.size(); ++r) {
    const ErrorCount c = count_errors(tx[r], rx[r]);
    QValue q = q_factor_from_count(c.errors, c.bits);
    if (c.bits < 1000 && q.flag == QFlag::Ok) q.flag = QFlag::LowConfidence;
    out.push_back(q);
  }
  return out;
}

}  // namespace apnlc
