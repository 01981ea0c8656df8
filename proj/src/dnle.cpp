#include "apnlc/dnle.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "apnlc/error.hpp"
#include "apnlc/kernels.hpp"

namespace apnlc {
namespace {

// erfc(kTaperEdge) / 2 ~ 3e-14: the taper is 1 to that accuracy at the
// passband edge and 0 to that accuracy at Nyquist.
constexpr double kTaperEdge = 5.3;
// Gaussian envelope exp(-x^2/2) at x = 7.1 is ~1e-11.
constexpr double kDecayRadius = 7.1;

constexpr double kLightNmPerPs = 2.99792458e5;

struct Taper {
  bool active = false;
  double center = 0.5;  // fraction of the sample rate
  double sigma = 0.0;
};

Taper make_taper(double passband) {
  require(passband > 0.0, ErrorCode::InvalidArgument, "cdc passband must be positive");
  Taper t;
  if (passband >= 0.5) return t;
  t.active = true;
  t.center = 0.5 * (passband + 0.5);
  t.sigma = (0.5 - passband) / (2.0 * std::numbers::sqrt2 * kTaperEdge);
  return t;
}

struct AccumulatedDispersion {
  double beta2_l;  // ps^2
  double beta3_l;  // ps^3
};

AccumulatedDispersion accumulated(const CdcParams& p, double center_frequency) {
  const double lambda = wavelength_nm(center_frequency);
  const double k = lambda / (2.0 * std::numbers::pi * kLightNmPerPs);
  return {-p.accumulated_dispersion * lambda * k,
          k * k * (lambda * lambda * p.accumulated_slope + 2.0 * lambda * p.accumulated_dispersion)};
}

double span_centroid(const FiberParams& f) {
  const double a = 2.0 * f.alpha_field();
  const double l = f.length_km;
  if (a * l < 1e-12) return 0.5 * l;
  return 1.0 / a - l * std::exp(-a * l) / (-std::expm1(-a * l));
}

}  // namespace

void cdc_response(std::span<cplx> out, double sample_rate, double center_frequency,
                  const CdcParams& p) {
  const std::size_t n = out.size();
  const auto d = accumulated(p, center_frequency);
  const Taper taper = make_taper(p.passband);
  const double rate_thz = sample_rate * 1e-12;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = bin_angular_frequency(k, n, rate_thz);
    const double phase = -(0.5 * d.beta2_l * w * w - d.beta3_l * w * w * w / 6.0);
    double gain = 1.0;
    if (taper.active) {
      const double f = std::abs(w) / (2.0 * std::numbers::pi * rate_thz);
      gain = 0.5 * std::erfc((f - taper.center) / (std::numbers::sqrt2 * taper.sigma));
    }
    out[k] = gain * cplx(std::cos(phase), std::sin(phase));
  }
}

std::size_t cdc_memory(double sample_rate, double center_frequency, const CdcParams& p) {
  const Taper taper = make_taper(p.passband);
  if (!taper.active) return std::numeric_limits<std::size_t>::max() / 16;
  const auto d = accumulated(p, center_frequency);
  const double rate_thz = sample_rate * 1e-12;
  const double w_max = std::numbers::pi * rate_thz;
  const double delay_ps = std::abs(d.beta2_l) * w_max + 0.5 * std::abs(d.beta3_l) * w_max * w_max;
  const double spread = delay_ps * rate_thz;
  const double decay = kDecayRadius / (2.0 * std::numbers::pi * taper.sigma);
  return static_cast<std::size_t>(std::ceil(spread + decay));
}

CdcParams cdc_for_link(const LinkConfig& link) {
  CdcParams p;
  p.accumulated_dispersion = link.fiber.dispersion * link.total_length_km();
  p.accumulated_slope = link.fiber.slope * link.total_length_km();
  return p;
}

ComplexSignal cd_compensate(const ComplexSignal& sig, const CdcParams& p) {
  sig.validate();
  const std::size_t block = p.block_size;
  require(block >= 8 && std::has_single_bit(block), ErrorCode::InvalidArgument,
          "cd_compensate: block size must be a power of two >= 8");
  const std::size_t memory = cdc_memory(sig.sample_rate, sig.center_frequency, p);
  require(block >= 4 * (2 * memory + 1), ErrorCode::Aliasing,
          "cd_compensate: block of " + std::to_string(block) + " samples is too short for " +
              std::to_string(2 * memory + 1) + " samples of channel memory");

  const std::size_t n = sig.size();
  const std::size_t guard = block / 4;   // discarded on each side
  const std::size_t valid = block - 2 * guard;
  std::vector<cplx> h(block);
  cdc_response(h, sig.sample_rate, sig.center_frequency, p);
  const double inv_b = 1.0 / static_cast<double>(block);
  for (auto& v : h) v *= inv_b;

  const Fft fft(block);
  ComplexSignal out = sig;
  std::vector<cplx> seg(block);
  for (std::size_t start = 0; start < n; start += valid) {
    // Segment begins `guard` samples before the output block, wrapping
    // around the periodic frame.
    const std::size_t origin = (start + n - guard % n) % n;
    for (std::size_t i = 0; i < block; ++i) seg[i] = sig.samples[(origin + i) % n];
    fft.forward(seg);
    kernels::spectral_multiply_serial(seg, h);
    fft.inverse(seg);
    const std::size_t count = std::min(valid, n - start);
    for (std::size_t i = 0; i < count; ++i) out.samples[start + i] = seg[guard + i];
  }
  return out;
}

ComplexSignal cd_compensate_monolithic(const ComplexSignal& sig, const CdcParams& p) {
  sig.validate();
  const std::size_t n = sig.size();
  std::vector<cplx> h(n);
  cdc_response(h, sig.sample_rate, sig.center_frequency, p);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& v : h) v *= inv_n;
  const Fft fft(n);
  ComplexSignal out = sig;
  fft.forward(out.samples);
  kernels::spectral_multiply_parallel(out.samples, h);
  fft.inverse(out.samples);
  return out;
}

ComplexSignal dbp_equalize(const ComplexSignal& sig, const DbpConfig& cfg) {
  require(cfg.steps_per_span >= 1, ErrorCode::InvalidArgument, "dbp: steps_per_span must be >= 1");
  cfg.link.validate();
  sig.validate();
  const double inv_root_g = std::pow(10.0, -cfg.link.amplifier().gain_db / 20.0);
  ComplexSignal out = sig;
  for (int span = cfg.link.n_spans - 1; span >= 0; --span) {
    for (auto& v : out.samples) v *= inv_root_g;
    detail::split_step(out.samples, out.sample_rate, out.center_frequency, cfg.link.fiber,
                       cfg.steps_per_span, detail::Direction::Inverse);
  }
  require(std::isfinite(out.energy()), ErrorCode::NumericalFailure, "dbp: non-finite output");
  return out;
}

ComplexSignal volterra_equalize(const ComplexSignal& sig, const VolterraConfig& cfg) {
  cfg.link.validate();
  sig.validate();
  const FiberParams& f = cfg.link.fiber;
  const std::size_t n = sig.size();
  const int spans = cfg.link.n_spans;
  const double lambda = wavelength_nm(sig.center_frequency);
  const double b2 = beta2_from_dispersion(f.dispersion, lambda);
  const double b3 = beta3_from_slope(f.dispersion, f.slope, lambda);
  const double total = cfg.link.total_length_km();
  const double centroid = span_centroid(f);
  const double kerr = f.gamma * f.effective_length();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Fft fft(n);

  std::vector<cplx> spectrum = sig.samples;
  fft.forward(spectrum);

  // Linear part: undo the whole link's dispersion.
  std::vector<cplx> y(n);
  {
    std::vector<cplx> h(n);
    detail::linear_response(h, sig.sample_rate, b2, b3, 0.0, -total, 1.0);
    for (std::size_t k = 0; k < n; ++k) y[k] = spectrum[k] * h[k];
  }

  if (kerr != 0.0) {
    std::vector<std::vector<cplx>> corrections(static_cast<std::size_t>(spans));
#pragma omp parallel for schedule(static)
    for (int s = 0; s < spans; ++s) {
      const double z = s * f.length_km + centroid;
      std::vector<cplx> h(n);
      std::vector<cplx> field(n);
      // Field at the span's nonlinear centroid.
      detail::linear_response(h, sig.sample_rate, b2, b3, 0.0, -(total - z), inv_n);
      for (std::size_t k = 0; k < n; ++k) field[k] = spectrum[k] * h[k];
      fft.inverse(field);
      for (auto& v : field) v *= cplx(0.0, -kerr * std::norm(v));
      fft.forward(field);
      detail::linear_response(h, sig.sample_rate, b2, b3, 0.0, -z, 1.0);
      for (std::size_t k = 0; k < n; ++k) field[k] *= h[k];
      corrections[static_cast<std::size_t>(s)] = std::move(field);
    }
    for (const auto& c : corrections)
      for (std::size_t k = 0; k < n; ++k) y[k] += c[k];
  }

  fft.inverse(y);
  ComplexSignal out = sig;
  for (std::size_t k = 0; k < n; ++k) out.samples[k] = y[k] * inv_n;
  require(std::isfinite(out.energy()), ErrorCode::NumericalFailure, "volterra: non-finite output");
  return out;
}

}  // namespace apnlc
