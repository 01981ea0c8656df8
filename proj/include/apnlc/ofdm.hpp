#pragma once

#include <cstddef>
#include <vector>

#include "apnlc/signal.hpp"

namespace apnlc {

/// Frame geometry. Active subcarriers are split evenly around an unused DC
/// bin: active index a < active/2 sits on bin a - active/2 (negative
/// frequencies), the rest on bin a - active/2 + 1.
struct OfdmConfig {
  std::size_t fft_size = 512;
  std::size_t active_subcarriers = 210;
  std::size_t cp_samples = 10;  // round(0.02 * 512)
  std::size_t n_symbols = 400;
  std::size_t n_training = 4;
  std::vector<std::size_t> pilot_indices = default_pilots(210, 8);
  double sample_rate = 25e9;

  std::size_t samples_per_symbol() const noexcept { return fft_size + cp_samples; }
  std::size_t frame_samples() const noexcept { return n_symbols * samples_per_symbol(); }
  std::size_t n_payload() const noexcept { return n_symbols - n_training; }

  /// FFT bin (0..fft_size-1) carrying active subcarrier `a`.
  std::size_t bin_of(std::size_t a) const noexcept;

  /// Active indices that are not pilots, ascending.
  std::vector<std::size_t> data_indices() const;

  /// Central third of the active indices.
  std::vector<std::size_t> middle_indices() const;

  void validate() const;

  /// n equally spaced pilot positions: round((i + 0.5) * active / n).
  static std::vector<std::size_t> default_pilots(std::size_t active, std::size_t n);
};

/// Subcarrier-major matrix of complex symbols.
class SymbolGrid {
 public:
  SymbolGrid() = default;
  SymbolGrid(std::size_t n_subcarriers, std::size_t n_symbols)
      : n_sc_(n_subcarriers), n_sym_(n_symbols), values_(n_subcarriers * n_symbols) {}

  std::size_t n_subcarriers() const noexcept { return n_sc_; }
  std::size_t n_symbols() const noexcept { return n_sym_; }
  bool empty() const noexcept { return values_.empty(); }

  cplx& at(std::size_t sc, std::size_t sym) { return values_[sc * n_sym_ + sym]; }
  const cplx& at(std::size_t sc, std::size_t sym) const { return values_[sc * n_sym_ + sym]; }

  std::span<cplx> row(std::size_t sc) { return {values_.data() + sc * n_sym_, n_sym_}; }
  std::span<const cplx> row(std::size_t sc) const { return {values_.data() + sc * n_sym_, n_sym_}; }

  std::vector<cplx>& values() noexcept { return values_; }
  const std::vector<cplx>& values() const noexcept { return values_; }

  /// Columns [first, first + count).
  SymbolGrid columns(std::size_t first, std::size_t count) const;
  /// Rows listed in `rows`, in that order.
  SymbolGrid rows(std::span<const std::size_t> rows) const;

  double mean_energy() const noexcept;

 private:
  std::size_t n_sc_ = 0;
  std::size_t n_sym_ = 0;
  std::vector<cplx> values_;
};

struct ChannelEstimate {
  std::vector<cplx> taps;
};

/// Unitary IDFT per symbol (1/sqrt(N)), cyclic prefix prepended.
ComplexSignal ofdm_modulate(const SymbolGrid& grid, const OfdmConfig& cfg,
                            double center_frequency = kDefaultCarrierHz);

/// Strip the prefix, unitary DFT, keep active bins. Frame start is sample 0.
SymbolGrid ofdm_demodulate(const ComplexSignal& sig, const OfdmConfig& cfg);

/// tap_k = mean_t rx(k,t) / tx(k,t).
ChannelEstimate estimate_channel(const SymbolGrid& rx_training, const SymbolGrid& tx_training);

SymbolGrid equalize_one_tap(const SymbolGrid& grid, const ChannelEstimate& est);

/// Per symbol t rotate every subcarrier by -angle(sum_p rx(p,t) conj(tx(p,t))).
/// `pilot_tx` holds the known pilot values, one row per entry of
/// `pilot_indices` and the same number of columns as `grid`.
SymbolGrid compensate_common_phase(const SymbolGrid& grid, const SymbolGrid& pilot_tx,
                                   std::span<const std::size_t> pilot_indices);

/// Known QPSK training block [active x n_training], fixed internal seed.
SymbolGrid training_symbols(const OfdmConfig& cfg);
/// Known QPSK pilot values [pilots x n_symbols]; training columns included.
SymbolGrid pilot_symbols(const OfdmConfig& cfg);

/// CSV "subcarrier,symbol,re,im".
void write_grid_csv(const std::filesystem::path& path, const SymbolGrid& grid);
SymbolGrid read_grid_csv(const std::filesystem::path& path);

}  // namespace apnlc
