#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "apnlc/dnle.hpp"
#include "apnlc/fiber.hpp"
#include "apnlc/nle_demap.hpp"
#include "apnlc/ofdm.hpp"

namespace apnlc {

enum class Equalizer { NONE, AP, KMEANS, FCM, DBP, VOLTERRA };

Equalizer parse_equalizer(std::string_view name);
std::string_view equalizer_name(Equalizer e) noexcept;
bool is_clustering(Equalizer e) noexcept;

/// Everything that determines one simulated measurement.
struct RunConfig {
  OfdmConfig ofdm;
  LinkConfig link;
  double wavelength_nm = 1550.0;
  bool link_bypass = false;        // identity channel (no fiber, no amplifiers)
  bool converters_enabled = true;  // DAC at the transmitter, ADC at the receiver
  Format format = Format::QAM16;
  Equalizer equalizer = Equalizer::NONE;
  NleOptions nle;
  int dbp_steps_per_span = 40;
  std::size_t cdc_block = 4096;
  double cdc_passband = 0.3;
  bool common_phase = true;
  int n_frames = 3;
  std::uint64_t seed = 1;
  bool dump_symbols = false;

  double center_frequency() const noexcept;
  void validate() const;
};

/// Flat "dotted.key = value" text. '#' starts a comment, blank lines are
/// ignored, keys not listed in the README are rejected.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
/// Canonical text: every key, fixed order, values with round-trip precision.
std::string serialize_config(const RunConfig& cfg);

/// Parse a comma separated list of doubles, e.g. "-4,-2,0".
std::vector<double> parse_number_list(std::string_view text);
std::vector<Equalizer> parse_equalizer_list(std::string_view text);

}  // namespace apnlc
