#include "apnlc/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "apnlc/error.hpp"
#include "apnlc/rng.hpp"

namespace apnlc {

std::size_t OfdmConfig::bin_of(std::size_t a) const noexcept {
  const std::size_t half = active_subcarriers / 2;
  if (a < half) return fft_size - half + a;  // negative frequencies
  return a - half + 1;                       // skip DC
}

std::vector<std::size_t> OfdmConfig::data_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < active_subcarriers; ++a)
    if (std::find(pilot_indices.begin(), pilot_indices.end(), a) == pilot_indices.end())
      out.push_back(a);
  return out;
}

std::vector<std::size_t> OfdmConfig::middle_indices() const {
  std::vector<std::size_t> out;
  const std::size_t third = active_subcarriers / 3;
  for (std::size_t a = third; a < active_subcarriers - third; ++a) out.push_back(a);
  return out;
}

void OfdmConfig::validate() const {
  require(fft_size >= 2, ErrorCode::InvalidArgument, "fft_size must be at least 2");
  require(active_subcarriers >= 1 && active_subcarriers < fft_size, ErrorCode::InvalidArgument,
          "active subcarriers must leave the DC bin free");
  require(cp_samples < fft_size, ErrorCode::InvalidArgument, "cyclic prefix too long");
  require(n_training < n_symbols, ErrorCode::InvalidArgument,
          "training symbols must leave room for payload");
  require(sample_rate > 0.0, ErrorCode::InvalidArgument, "sample rate must be positive");
  for (auto p : pilot_indices)
    require(p < active_subcarriers, ErrorCode::InvalidArgument, "pilot index out of range");
}

std::vector<std::size_t> OfdmConfig::default_pilots(std::size_t active, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(static_cast<std::size_t>(
        std::floor((static_cast<double>(i) + 0.5) * static_cast<double>(active) /
                       static_cast<double>(n) + 0.5)));
  return out;
}

SymbolGrid SymbolGrid::columns(std::size_t first, std::size_t count) const {
  require(first + count <= n_sym_, ErrorCode::DimensionMismatch, "column range out of bounds");
  SymbolGrid out(n_sc_, count);
  for (std::size_t k = 0; k < n_sc_; ++k)
    std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(k * n_sym_ + first), count,
                out.values_.begin() + static_cast<std::ptrdiff_t>(k * count));
  return out;
}

SymbolGrid SymbolGrid::rows(std::span<const std::size_t> rows) const {
  SymbolGrid out(rows.size(), n_sym_);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r] < n_sc_, ErrorCode::DimensionMismatch, "row index out of bounds");
    const auto src = row(rows[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

double SymbolGrid::mean_energy() const noexcept {
  if (values_.empty()) return 0.0;
  double e = 0.0;
  for (const auto& v : values_) e += std::norm(v);
  return e / static_cast<double>(values_.size());
}

ComplexSignal ofdm_modulate(const SymbolGrid& grid, const OfdmConfig& cfg,
                            double center_frequency) {
  cfg.validate();
  require(grid.n_subcarriers() == cfg.active_subcarriers && grid.n_symbols() == cfg.n_symbols,
          ErrorCode::DimensionMismatch, "ofdm_modulate: grid does not match config");
  const std::size_t n = cfg.fft_size;
  const std::size_t sps = cfg.samples_per_symbol();
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  const Fft fft(n);

  ComplexSignal out;
  out.sample_rate = cfg.sample_rate;
  out.center_frequency = center_frequency;
  out.samples.assign(cfg.frame_samples(), cplx{});
  std::vector<cplx> body(n);
  for (std::size_t t = 0; t < cfg.n_symbols; ++t) {
    std::fill(body.begin(), body.end(), cplx{});
    for (std::size_t a = 0; a < cfg.active_subcarriers; ++a) body[cfg.bin_of(a)] = grid.at(a, t);
    fft.inverse(body);
    cplx* dst = out.samples.data() + t * sps;
    for (std::size_t i = 0; i < cfg.cp_samples; ++i) dst[i] = body[n - cfg.cp_samples + i] * norm;
    for (std::size_t i = 0; i < n; ++i) dst[cfg.cp_samples + i] = body[i] * norm;
  }
  return out;
}

SymbolGrid ofdm_demodulate(const ComplexSignal& sig, const OfdmConfig& cfg) {
  cfg.validate();
  require(sig.size() == cfg.frame_samples(), ErrorCode::LengthMismatch,
          "ofdm_demodulate: expected " + std::to_string(cfg.frame_samples()) + " samples, got " +
              std::to_string(sig.size()));
  const std::size_t n = cfg.fft_size;
  const std::size_t sps = cfg.samples_per_symbol();
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  const Fft fft(n);

  SymbolGrid grid(cfg.active_subcarriers, cfg.n_symbols);
  std::vector<cplx> body(n);
  for (std::size_t t = 0; t < cfg.n_symbols; ++t) {
    const cplx* src = sig.samples.data() + t * sps + cfg.cp_samples;
    std::copy_n(src, n, body.begin());
    fft.forward(body);
    for (std::size_t a = 0; a < cfg.active_subcarriers; ++a)
      grid.at(a, t) = body[cfg.bin_of(a)] * norm;
  }
  return grid;
}

ChannelEstimate estimate_channel(const SymbolGrid& rx_training, const SymbolGrid& tx_training) {
  require(rx_training.n_subcarriers() == tx_training.n_subcarriers() &&
              rx_training.n_symbols() == tx_training.n_symbols() && !tx_training.empty(),
          ErrorCode::DimensionMismatch, "estimate_channel: training grids differ in shape");
  ChannelEstimate est;
  est.taps.resize(rx_training.n_subcarriers());
  const auto nt = static_cast<double>(rx_training.n_symbols());
  for (std::size_t k = 0; k < rx_training.n_subcarriers(); ++k) {
    cplx acc{};
    for (std::size_t t = 0; t < rx_training.n_symbols(); ++t) {
      const cplx tx = tx_training.at(k, t);
      require(std::abs(tx) > 0.0, ErrorCode::EstimationFailure,
              "estimate_channel: zero training symbol on subcarrier " + std::to_string(k));
      acc += rx_training.at(k, t) / tx;
    }
    est.taps[k] = acc / nt;
    require(std::abs(est.taps[k]) > 0.0, ErrorCode::EstimationFailure,
            "estimate_channel: zero tap on subcarrier " + std::to_string(k));
  }
  return est;
}

SymbolGrid equalize_one_tap(const SymbolGrid& grid, const ChannelEstimate& est) {
  require(est.taps.size() == grid.n_subcarriers(), ErrorCode::DimensionMismatch,
          "equalize_one_tap: tap count does not match grid");
  SymbolGrid out = grid;
  for (std::size_t k = 0; k < grid.n_subcarriers(); ++k) {
    require(std::abs(est.taps[k]) > 0.0, ErrorCode::EstimationFailure,
            "equalize_one_tap: zero tap on subcarrier " + std::to_string(k));
    const cplx inv = 1.0 / est.taps[k];
    for (auto& v : out.row(k)) v *= inv;
  }
  return out;
}

SymbolGrid compensate_common_phase(const SymbolGrid& grid, const SymbolGrid& pilot_tx,
                                   std::span<const std::size_t> pilot_indices) {
  require(!pilot_indices.empty(), ErrorCode::InvalidArgument, "no pilot subcarriers");
  require(pilot_tx.n_subcarriers() == pilot_indices.size() &&
              pilot_tx.n_symbols() == grid.n_symbols(),
          ErrorCode::DimensionMismatch, "pilot table does not match grid");
  SymbolGrid out = grid;
  for (std::size_t t = 0; t < grid.n_symbols(); ++t) {
    cplx acc{};
    for (std::size_t p = 0; p < pilot_indices.size(); ++p) {
      require(pilot_indices[p] < grid.n_subcarriers(), ErrorCode::InvalidArgument,
              "pilot index out of range");
      acc += grid.at(pilot_indices[p], t) * std::conj(pilot_tx.at(p, t));
    }
    require(std::abs(acc) > 0.0, ErrorCode::PhaseUndefined,
            "common phase undefined for symbol " + std::to_string(t));
    const cplx rot = std::conj(acc) / std::abs(acc);
    for (std::size_t k = 0; k < grid.n_subcarriers(); ++k) out.at(k, t) *= rot;
  }
  return out;
}

namespace {

constexpr std::uint64_t kTrainingSeed = 0x7261696e696e6731ull;
constexpr std::uint64_t kPilotSeed = 0x70696c6f74733031ull;

cplx random_qpsk(Rng& rng) {
  const double s = 1.0 / std::sqrt(2.0);
  const auto v = rng.next_u64();
  return {(v & 1u) ? -s : s, (v & 2u) ? -s : s};
}

}  // namespace

SymbolGrid training_symbols(const OfdmConfig& cfg) {
  Rng rng(kTrainingSeed);
  SymbolGrid g(cfg.active_subcarriers, cfg.n_training);
  for (std::size_t k = 0; k < g.n_subcarriers(); ++k)
    for (std::size_t t = 0; t < g.n_symbols(); ++t) g.at(k, t) = random_qpsk(rng);
  return g;
}

SymbolGrid pilot_symbols(const OfdmConfig& cfg) {
  Rng rng(kPilotSeed);
  SymbolGrid g(cfg.pilot_indices.size(), cfg.n_symbols);
  for (std::size_t p = 0; p < g.n_subcarriers(); ++p)
    for (std::size_t t = 0; t < g.n_symbols(); ++t) g.at(p, t) = random_qpsk(rng);
  return g;
}

void write_grid_csv(const std::filesystem::path& path, const SymbolGrid& grid) {
  std::ofstream f(path);
  require(static_cast<bool>(f), ErrorCode::Io, "cannot open " + path.string());
  f << "subcarrier,symbol,re,im\n" << std::setprecision(17);
  for (std::size_t k = 0; k < grid.n_subcarriers(); ++k)
    for (std::size_t t = 0; t < grid.n_symbols(); ++t)
      f << k << ',' << t << ',' << grid.at(k, t).real() << ',' << grid.at(k, t).imag() << '\n';
  require(static_cast<bool>(f), ErrorCode::Io, "write failed: " + path.string());
}

SymbolGrid read_grid_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  require(static_cast<bool>(f), ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  std::getline(f, line);
  require(line == "subcarrier,symbol,re,im", ErrorCode::Io,
          path.string() + ": expected header 'subcarrier,symbol,re,im'");
  struct Cell { std::size_t k, t; cplx v; };
  std::vector<Cell> cells;
  std::size_t max_k = 0, max_t = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    Cell c{};
    char comma;
    double re, im;
    ss >> c.k >> comma >> c.t >> comma >> re >> comma >> im;
    require(static_cast<bool>(ss), ErrorCode::Io, path.string() + ": malformed row: " + line);
    c.v = {re, im};
    max_k = std::max(max_k, c.k);
    max_t = std::max(max_t, c.t);
    cells.push_back(c);
  }
  require(!cells.empty(), ErrorCode::Io, path.string() + ": no rows");
  SymbolGrid g(max_k + 1, max_t + 1);
  for (const auto& c : cells) g.at(c.k, c.t) = c.v;
  return g;
}

}  // namespace apnlc
