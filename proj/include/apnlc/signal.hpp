#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apnlc/fft.hpp"

namespace apnlc {

/// c / 1550 nm.
inline constexpr double kDefaultCarrierHz = 193.41448903225806e12;
inline constexpr double kSpeedOfLight = 299792458.0;     // m/s
inline constexpr double kPlanck = 6.62607015e-34;        // J s

/// Uniformly sampled complex baseband field. |a|^2 is instantaneous optical
/// power in watts.
struct ComplexSignal {
  std::vector<cplx> samples;
  double sample_rate = 0.0;       // Hz
  double center_frequency = 0.0;  // Hz

  std::size_t size() const noexcept { return samples.size(); }
  double mean_power() const noexcept;
  double energy() const noexcept;
  /// Throws InvalidArgument if any invariant is broken.
  void validate() const;
};

struct BitStream {
  std::vector<std::uint8_t> bits;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return bits.size(); }
  bool operator==(const BitStream& o) const { return bits == o.bits; }
};

enum class Format { QPSK, QAM16 };

Format parse_format(std::string_view name);
std::string_view format_name(Format f) noexcept;

/// Ideal points with Gray bit labels. Point index equals the integer value
/// of its label read MSB first, so labels[i] == i.
///
/// QPSK: b0 selects the I sign, b1 the Q sign (0 -> +, 1 -> -), scaled by
/// 1/sqrt(2).  00 -> (1+j)/sqrt2, 01 -> (1-j)/sqrt2, 10 -> (-1+j)/sqrt2,
/// 11 -> (-1-j)/sqrt2.
///
/// 16-QAM: b0b1 picks the I level and b2b3 the Q level through the 2-bit
/// Gray code 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3, scaled by 1/sqrt(10).
struct Constellation {
  Format format;
  std::vector<cplx> points;
  std::vector<std::uint32_t> labels;
  int bits_per_symbol = 0;

  std::size_t size() const noexcept { return points.size(); }
  std::string_view name() const noexcept { return format_name(format); }
};

/// n bits from mt19937_64(seed); each 64-bit draw is consumed LSB first.
BitStream prbs_generate(std::uint64_t seed, std::size_t n);

Constellation constellation_points(Format format);
Constellation constellation_points(std::string_view name);

/// Groups of bits_per_symbol bits, MSB first, select the point whose label
/// matches. Length must be a positive multiple of bits_per_symbol.
std::vector<cplx> map_bits(std::span<const std::uint8_t> bits, const Constellation& c);
inline std::vector<cplx> map_bits(const BitStream& bits, const Constellation& c) {
  return map_bits(std::span<const std::uint8_t>(bits.bits), c);
}

/// Index of the Euclidean-nearest point; ties go to the lowest index.
std::size_t nearest_point(cplx x, const Constellation& c) noexcept;

BitStream demap_hard(std::span<const cplx> symbols, const Constellation& c);

/// Append the label of point `index` to `out`, MSB first.
void append_label_bits(std::size_t index, const Constellation& c,
                       std::vector<std::uint8_t>& out);

// Symbol dumps.
//   CSV: header "re,im", one symbol per row, 17 significant digits.
//   Binary: little-endian IEEE-754 float64, interleaved re, im; no header.
void write_symbols_csv(const std::filesystem::path& path, std::span<const cplx> symbols);
std::vector<cplx> read_symbols_csv(const std::filesystem::path& path);
void write_symbols_binary(const std::filesystem::path& path, std::span<const cplx> symbols);
std::vector<cplx> read_symbols_binary(const std::filesystem::path& path);

}  // namespace apnlc
