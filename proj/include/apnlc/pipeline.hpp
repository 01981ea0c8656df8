#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "apnlc/config.hpp"
#include "apnlc/metrics.hpp"

namespace apnlc {

/// Transmitted frame plus everything the receiver needs to score it.
struct TxFrame {
  SymbolGrid grid;                 // [active x n_symbols], training + pilots + data
  std::vector<std::size_t> data_point_index;  // constellation index per data cell,
                                              // row-major [data sc x payload]
  ComplexSignal waveform;          // ofdm_modulate output, unit-less scale
};

std::uint64_t data_seed(const RunConfig& cfg, std::size_t frame) noexcept;
std::uint64_t noise_seed(const RunConfig& cfg, double launch_power_dbm, std::size_t frame) noexcept;

TxFrame transmit_frame(const RunConfig& cfg, std::size_t frame);

/// DAC, launch power, link and ADC. Deterministic in (cfg, frame).
ComplexSignal run_channel(const RunConfig& cfg, const TxFrame& tx, std::size_t frame);

struct ReceiverOutput {
  QualityReport report;
  SymbolGrid equalized;  // [data sc x payload * frames] before decisions
};

/// Receiver DSP for `equalizer` over all frames.
ReceiverOutput run_receiver(const RunConfig& cfg, Equalizer equalizer,
                            std::span<const TxFrame> tx, std::span<const ComplexSignal> rx);

QualityReport run_once(const RunConfig& cfg);

struct SweepRow {
  double launch_power_dbm = 0.0;
  Equalizer equalizer = Equalizer::NONE;
  QualityReport report;
  double runtime_seconds = 0.0;
  std::uint64_t seed = 0;
  std::vector<cplx> symbols;  // equalized cloud of the middle subcarrier if dumping
};

struct SeedEntry {
  double launch_power_dbm = 0.0;
  std::size_t frame = 0;
  std::uint64_t data_seed = 0;
  std::uint64_t noise_seed = 0;
};

struct SweepResult {
  RunConfig config;
  std::vector<SweepRow> rows;  // sorted by (power, equalizer)
  std::vector<SeedEntry> seeds;
};

/// Every (power, method) cell. All methods at one power see the same
/// received waveforms.
SweepResult sweep_lop(const RunConfig& cfg, std::span<const double> powers,
                      std::span<const Equalizer> methods);

}  // namespace apnlc
