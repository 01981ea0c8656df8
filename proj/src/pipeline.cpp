#include "apnlc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>

#include "apnlc/dnle.hpp"
#include "apnlc/error.hpp"
#include "apnlc/results.hpp"
#include "apnlc/rng.hpp"

namespace apnlc {

namespace {

constexpr std::uint64_t kDataTag = 0x7478;    // "tx"
constexpr std::uint64_t kNoiseTag = 0x6e6f;   // "no"

// Runs `fn`, re-raising library errors with a stage tag.
template <class F>
auto staged(const std::string& stage, std::size_t frame, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    fail(e.code(), "[" + stage + ", frame " + std::to_string(frame) + "] " + e.what());
  }
}

std::uint64_t power_key(double p) noexcept {
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(std::llround(p * 1000.0)));
}

ComplexSignal waveform_equalize(const RunConfig& cfg, Equalizer eq, const ComplexSignal& rx) {
  if (cfg.link_bypass) return rx;
  switch (eq) {
    case Equalizer::DBP: {
      DbpConfig d;
      d.steps_per_span = cfg.dbp_steps_per_span;
      d.link = cfg.link;
      return dbp_equalize(rx, d);
    }
    case Equalizer::VOLTERRA: {
      VolterraConfig v;
      v.link = cfg.link;
      return volterra_equalize(rx, v);
    }
    default: {
      CdcParams p = cdc_for_link(cfg.link);
      p.block_size = cfg.cdc_block;
      p.passband = cfg.cdc_passband;
      return cd_compensate(rx, p);
    }
  }
}

ClusterMethod cluster_method(Equalizer e) {
  switch (e) {
    case Equalizer::AP: return ClusterMethod::AP;
    case Equalizer::KMEANS: return ClusterMethod::KMEANS;
    default: return ClusterMethod::FCM;
  }
}

}  // namespace

std::uint64_t data_seed(const RunConfig& cfg, std::size_t frame) noexcept {
  return derive_seed(cfg.seed, kDataTag, frame);
}

std::uint64_t noise_seed(const RunConfig& cfg, double launch_power_dbm, std::size_t frame) noexcept {
  return derive_seed(derive_seed(cfg.seed, kNoiseTag, power_key(launch_power_dbm)), frame);
}

TxFrame transmit_frame(const RunConfig& cfg, std::size_t frame) {
  const OfdmConfig& o = cfg.ofdm;
  const Constellation c = constellation_points(cfg.format);
  const auto data = o.data_indices();
  const std::size_t payload = o.n_payload();

  TxFrame tx;
  tx.grid = SymbolGrid(o.active_subcarriers, o.n_symbols);
  const SymbolGrid training = training_symbols(o);
  for (std::size_t k = 0; k < o.active_subcarriers; ++k)
    for (std::size_t t = 0; t < o.n_training; ++t) tx.grid.at(k, t) = training.at(k, t);
  const SymbolGrid pilots = pilot_symbols(o);
  for (std::size_t p = 0; p < o.pilot_indices.size(); ++p)
    for (std::size_t t = o.n_training; t < o.n_symbols; ++t)
      tx.grid.at(o.pilot_indices[p], t) = pilots.at(p, t);

  const BitStream bits = prbs_generate(data_seed(cfg, frame), data.size() * payload * c.bits_per_symbol);
  const std::vector<cplx> symbols = map_bits(bits, c);
  tx.data_point_index.resize(symbols.size());
  for (std::size_t r = 0; r < data.size(); ++r)
    for (std::size_t t = 0; t < payload; ++t) {
      const std::size_t i = r * payload + t;
      tx.grid.at(data[r], o.n_training + t) = symbols[i];
      tx.data_point_index[i] = nearest_point(symbols[i], c);
    }
  tx.waveform = ofdm_modulate(tx.grid, o, cfg.center_frequency());
  return tx;
}

ComplexSignal run_channel(const RunConfig& cfg, const TxFrame& tx, std::size_t frame) {
  ComplexSignal sig = tx.waveform;
  if (cfg.converters_enabled)
    sig = staged("dac", frame, [&] { return dac_adc(sig, cfg.link.converters); });
  sig = staged("launch", frame, [&] { return set_launch_power(sig, cfg.link.launch_power_dbm); });
  if (!cfg.link_bypass) {
    Rng rng(noise_seed(cfg, cfg.link.launch_power_dbm, frame));
    sig = staged("link", frame, [&] { return propagate_link(sig, cfg.link, rng); });
  }
  if (cfg.converters_enabled)
    sig = staged("adc", frame, [&] { return dac_adc(sig, cfg.link.converters); });
  return sig;
}

ReceiverOutput run_receiver(const RunConfig& cfg, Equalizer equalizer, std::span<const TxFrame> tx,
                            std::span<const ComplexSignal> rx) {
  require(!tx.empty() && tx.size() == rx.size(), ErrorCode::LengthMismatch,
          "run_receiver: frame count mismatch");
  const OfdmConfig& o = cfg.ofdm;
  const Constellation c = constellation_points(cfg.format);
  const auto data = o.data_indices();
  const std::size_t payload = o.n_payload();
  const std::size_t frames = tx.size();

  SymbolGrid eq(data.size(), payload * frames);
  SymbolGrid reference(data.size(), payload * frames);
  std::vector<std::vector<std::uint8_t>> tx_bits(data.size());

  for (std::size_t f = 0; f < frames; ++f) {
    const ComplexSignal shaped = staged(std::string("equalize ") + std::string(equalizer_name(equalizer)), f,
                                        [&] { return waveform_equalize(cfg, equalizer, rx[f]); });
    SymbolGrid grid = staged("demodulate", f, [&] { return ofdm_demodulate(shaped, o); });
    const SymbolGrid tx_train = tx[f].grid.columns(0, o.n_training);
    const ChannelEstimate est =
        staged("channel estimate", f, [&] { return estimate_channel(grid.columns(0, o.n_training), tx_train); });
    grid = staged("one-tap", f, [&] { return equalize_one_tap(grid, est); });
    if (cfg.common_phase) {
      const SymbolGrid pilot_tx = tx[f].grid.rows(o.pilot_indices);
      grid = staged("common phase", f,
                    [&] { return compensate_common_phase(grid, pilot_tx, o.pilot_indices); });
    }
    for (std::size_t r = 0; r < data.size(); ++r)
      for (std::size_t t = 0; t < payload; ++t) {
        eq.at(r, f * payload + t) = grid.at(data[r], o.n_training + t);
        reference.at(r, f * payload + t) = tx[f].grid.at(data[r], o.n_training + t);
        append_label_bits(tx[f].data_point_index[r * payload + t], c, tx_bits[r]);
      }
  }

  std::vector<std::vector<std::uint8_t>> rx_bits(data.size());
  std::size_t trimmed = 0;
  if (is_clustering(equalizer)) {
    NleOptions opts = cfg.nle;
    opts.seed = cfg.seed;
    const NleResult res = staged("nle_demap", 0, [&] { return nle_demap(eq, cluster_method(equalizer), c, opts); });
    rx_bits = res.bits;
    trimmed = res.ap_trimmed_rows.size();
  } else {
    for (std::size_t r = 0; r < data.size(); ++r)
      for (const cplx v : eq.row(r)) append_label_bits(nearest_point(v, c), c, rx_bits[r]);
  }

  ReceiverOutput out;
  QualityReport& rep = out.report;
  for (std::size_t r = 0; r < data.size(); ++r) {
    const ErrorCount e = count_errors(tx_bits[r], rx_bits[r]);
    rep.bits_counted += e.bits;
    rep.bit_errors += e.errors;
  }
  rep.ber = static_cast<double>(rep.bit_errors) / static_cast<double>(rep.bits_counted);
  rep.q = q_factor_from_count(rep.bit_errors, rep.bits_counted);
  rep.evm_percent = evm_percent(eq, reference);
  rep.per_subcarrier_q = per_subcarrier_q(tx_bits, rx_bits);
  rep.subcarrier_index = data;
  rep.ap_trimmed = trimmed;
  out.equalized = std::move(eq);
  return out;
}

QualityReport run_once(const RunConfig& cfg) {
  cfg.validate();
  std::vector<TxFrame> tx;
  std::vector<ComplexSignal> rx;
  for (std::size_t f = 0; f < static_cast<std::size_t>(cfg.n_frames); ++f) {
    tx.push_back(staged("transmit", f, [&] { return transmit_frame(cfg, f); }));
    rx.push_back(run_channel(cfg, tx.back(), f));
  }
  return run_receiver(cfg, cfg.equalizer, tx, rx).report;
}

SweepResult sweep_lop(const RunConfig& cfg, std::span<const double> powers,
                      std::span<const Equalizer> methods) {
  require(!powers.empty() && !methods.empty(), ErrorCode::EmptyRequest,
          "sweep needs at least one power and one method");
  cfg.validate();
  for (std::size_t i = 0; i < powers.size(); ++i)
    for (std::size_t j = i + 1; j < powers.size(); ++j)
      require(power_key(powers[i]) != power_key(powers[j]), ErrorCode::InvalidArgument,
              "sweep: duplicate launch power " + format_double(powers[i]));
  const std::size_t frames = static_cast<std::size_t>(cfg.n_frames);

  std::vector<TxFrame> tx;
  for (std::size_t f = 0; f < frames; ++f)
    tx.push_back(staged("transmit", f, [&] { return transmit_frame(cfg, f); }));

  SweepResult res;
  res.config = cfg;
  res.rows.resize(powers.size() * methods.size());
  std::vector<std::exception_ptr> errors(powers.size());
  const auto n_powers = static_cast<std::ptrdiff_t>(powers.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t pi = 0; pi < n_powers; ++pi) {
    const auto p = static_cast<std::size_t>(pi);
    try {
      RunConfig cell = cfg;
      cell.link.launch_power_dbm = powers[p];
      const auto t0 = std::chrono::steady_clock::now();
      std::vector<ComplexSignal> rx;
      for (std::size_t f = 0; f < frames; ++f) rx.push_back(run_channel(cell, tx[f], f));
      const double channel_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      for (std::size_t m = 0; m < methods.size(); ++m) {
        const auto t1 = std::chrono::steady_clock::now();
        ReceiverOutput out = [&] {
          try {
            return run_receiver(cell, methods[m], tx, rx);
          } catch (const Error& e) {
            fail(e.code(), "[cell " + format_double(powers[p]) + " dBm, " +
                               std::string(equalizer_name(methods[m])) + "] " + e.what());
          }
        }();
        SweepRow& row = res.rows[p * methods.size() + m];
        row.launch_power_dbm = powers[p];
        row.equalizer = methods[m];
        row.report = std::move(out.report);
        row.seed = cfg.seed;
        row.runtime_seconds =
            channel_s + std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
        if (cfg.dump_symbols) {
          const std::size_t mid = out.equalized.n_subcarriers() / 2;
          const auto cloud = out.equalized.row(mid);
          row.symbols.assign(cloud.begin(), cloud.end());
        }
      }
    } catch (...) {
      errors[p] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::stable_sort(res.rows.begin(), res.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.launch_power_dbm != b.launch_power_dbm) return a.launch_power_dbm < b.launch_power_dbm;
    return a.equalizer < b.equalizer;
  });
  std::vector<double> sorted(powers.begin(), powers.end());
  std::sort(sorted.begin(), sorted.end());
  for (const double p : sorted)
    for (std::size_t f = 0; f < frames; ++f)
      res.seeds.push_back({p, f, data_seed(cfg, f), noise_seed(cfg, p, f)});
  return res;
}

}  // namespace apnlc
