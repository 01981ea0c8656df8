#include "apnlc/signal.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "apnlc/error.hpp"

namespace apnlc {

double ComplexSignal::mean_power() const noexcept {
  return samples.empty() ? 0.0 : energy() / static_cast<double>(samples.size());
}

double ComplexSignal::energy() const noexcept {
  double e = 0.0;
  for (const auto& a : samples) e += std::norm(a);
  return e;
}

void ComplexSignal::validate() const {
  require(!samples.empty(), ErrorCode::InvalidArgument, "signal has no samples");
  require(sample_rate > 0.0, ErrorCode::InvalidArgument, "sample rate must be positive");
  require(center_frequency > 0.0, ErrorCode::InvalidArgument,
          "center frequency must be positive");
  require(std::isfinite(energy()), ErrorCode::NumericalFailure, "signal has non-finite samples");
}

Format parse_format(std::string_view name) {
  if (name == "QPSK" || name == "qpsk") return Format::QPSK;
  if (name == "16QAM" || name == "16qam" || name == "16-QAM") return Format::QAM16;
  fail(ErrorCode::UnsupportedFormat, "unsupported format: " + std::string(name));
}

std::string_view format_name(Format f) noexcept {
  return f == Format::QPSK ? "QPSK" : "16QAM";
}

BitStream prbs_generate(std::uint64_t seed, std::size_t n) {
  require(n > 0, ErrorCode::EmptyRequest, "prbs_generate: zero bits requested");
  BitStream out;
  out.seed = seed;
  out.bits.resize(n);
  std::mt19937_64 engine(seed);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = engine();
    out.bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return out;
}

namespace {

// 2-bit Gray code to PAM-4 level.
constexpr double kGrayLevel[4] = {-3.0, -1.0, 3.0, 1.0};  // 00, 01, 10, 11

}  // namespace

Constellation constellation_points(Format format) {
  Constellation c;
  c.format = format;
  if (format == Format::QPSK) {
    c.bits_per_symbol = 2;
    const double s = 1.0 / std::sqrt(2.0);
    for (std::uint32_t label = 0; label < 4; ++label) {
      const double re = (label & 2u) ? -s : s;
      const double im = (label & 1u) ? -s : s;
      c.points.emplace_back(re, im);
      c.labels.push_back(label);
    }
  } else {
    c.bits_per_symbol = 4;
    const double s = 1.0 / std::sqrt(10.0);
    for (std::uint32_t label = 0; label < 16; ++label) {
      c.points.emplace_back(kGrayLevel[label >> 2] * s, kGrayLevel[label & 3u] * s);
      c.labels.push_back(label);
    }
  }
  return c;
}

Constellation constellation_points(std::string_view name) {
  return constellation_points(parse_format(name));
}

std::vector<cplx> map_bits(std::span<const std::uint8_t> bits, const Constellation& c) {
  const auto bps = static_cast<std::size_t>(c.bits_per_symbol);
  require(!bits.empty(), ErrorCode::EmptyRequest, "map_bits: no bits");
  require(bits.size() % bps == 0, ErrorCode::Padding,
          "map_bits: bit count not a multiple of bits per symbol");
  std::vector<cplx> out(bits.size() / bps);
  for (std::size_t s = 0; s < out.size(); ++s) {
    std::uint32_t label = 0;
    for (std::size_t b = 0; b < bps; ++b) label = (label << 1) | (bits[s * bps + b] & 1u);
    out[s] = c.points[label];
  }
  return out;
}

std::size_t nearest_point(cplx x, const Constellation& c) noexcept {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const double d = std::norm(x - c.points[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

void append_label_bits(std::size_t index, const Constellation& c, std::vector<std::uint8_t>& out) {
  const std::uint32_t label = c.labels[index];
  for (int b = c.bits_per_symbol - 1; b >= 0; --b) out.push_back((label >> b) & 1u);
}

BitStream demap_hard(std::span<const cplx> symbols, const Constellation& c) {
  require(!symbols.empty(), ErrorCode::EmptyRequest, "demap_hard: no symbols");
  BitStream out;
  out.bits.reserve(symbols.size() * static_cast<std::size_t>(c.bits_per_symbol));
  for (const auto& x : symbols) append_label_bits(nearest_point(x, c), c, out.bits);
  return out;
}

void write_symbols_csv(const std::filesystem::path& path, std::span<const cplx> symbols) {
  std::ofstream f(path);
  require(static_cast<bool>(f), ErrorCode::Io, "cannot open " + path.string());
  f << "re,im\n" << std::setprecision(17);
  for (const auto& x : symbols) f << x.real() << ',' << x.imag() << '\n';
  require(static_cast<bool>(f), ErrorCode::Io, "write failed: " + path.string());
}

std::vector<cplx> read_symbols_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  require(static_cast<bool>(f), ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  std::getline(f, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "re,im", ErrorCode::Io, path.string() + ": expected header 're,im'");
  std::vector<cplx> out;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, ErrorCode::Io,
            path.string() + ":" + std::to_string(lineno) + ": expected re,im");
    try {
      out.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      fail(ErrorCode::Io, path.string() + ":" + std::to_string(lineno) + ": bad number");
    }
  }
  return out;
}

namespace {

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

}  // namespace

void write_symbols_binary(const std::filesystem::path& path, std::span<const cplx> symbols) {
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorCode::Io, "cannot open " + path.string());
  for (const auto& x : symbols) {
    for (double v : {x.real(), x.imag()}) {
      const std::uint64_t w = to_le(std::bit_cast<std::uint64_t>(v));
      f.write(reinterpret_cast<const char*>(&w), sizeof w);
    }
  }
  require(static_cast<bool>(f), ErrorCode::Io, "write failed: " + path.string());
}

std::vector<cplx> read_symbols_binary(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorCode::Io, "cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  require(bytes.size() % 16 == 0, ErrorCode::Io,
          path.string() + ": size is not a multiple of 16 bytes");
  std::vector<cplx> out(bytes.size() / 16);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t re, im;
    std::memcpy(&re, bytes.data() + 16 * i, 8);
    std::memcpy(&im, bytes.data() + 16 * i + 8, 8);
    out[i] = {std::bit_cast<double>(to_le(re)), std::bit_cast<double>(to_le(im))};
  }
  return out;
}

}  // namespace apnlc
