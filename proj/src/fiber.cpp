#include "apnlc/fiber.hpp"

#include <cmath>
#include <numbers>

#include "apnlc/error.hpp"
#include "apnlc/kernels.hpp"

namespace apnlc {
namespace {

constexpr double kLightNmPerPs = 2.99792458e5;
constexpr double kDbToNeper = std::numbers::ln10 / 10.0;

}  // namespace

void FiberParams::validate() const {
  require(gamma >= 0.0, ErrorCode::InvalidArgument, "fiber gamma must be >= 0");
  require(alpha_db >= 0.0, ErrorCode::InvalidArgument, "fiber loss must be >= 0");
  require(length_km > 0.0, ErrorCode::InvalidArgument, "fiber length must be > 0");
  require(std::isfinite(dispersion) && std::isfinite(slope), ErrorCode::InvalidArgument,
          "fiber dispersion must be finite");
}

double FiberParams::alpha_field() const noexcept { return 0.5 * alpha_db * kDbToNeper; }

double FiberParams::effective_length() const noexcept {
  const double a = alpha_db * kDbToNeper;
  if (a == 0.0) return length_km;
  return -std::expm1(-a * length_km) / a;
}

void AmplifierParams::validate() const {
  require(gain_db >= 0.0, ErrorCode::InvalidArgument, "amplifier gain must be >= 0 dB");
  if (enforce_quantum_limit)
    require(noise_figure_db >= 3.0, ErrorCode::InvalidArgument,
            "noise figure below the 3 dB quantum limit");
}

double AmplifierParams::spontaneous_emission_factor() const noexcept {
  return std::pow(10.0, noise_figure_db / 10.0) / 2.0;
}

void ConverterParams::validate() const {
  require(resolution_bits >= 1 && resolution_bits <= 30, ErrorCode::InvalidArgument,
          "converter resolution must be 1..30 bits");
  require(clipping_ratio_db > 0.0, ErrorCode::InvalidArgument, "clipping ratio must be > 0 dB");
}

void LinkConfig::validate() const {
  require(n_spans >= 1, ErrorCode::InvalidArgument, "link needs at least one span");
  require(steps_per_span >= 1, ErrorCode::InvalidArgument, "steps_per_span must be >= 1");
  fiber.validate();
  amplifier().validate();
  converters.validate();
}

AmplifierParams LinkConfig::amplifier() const {
  AmplifierParams a = amp;
  a.gain_db = gain_db.value_or(fiber.span_loss_db());
  return a;
}

double beta2_from_dispersion(double dispersion, double wavelength) noexcept {
  return -dispersion * wavelength * wavelength / (2.0 * std::numbers::pi * kLightNmPerPs);
}

double beta3_from_slope(double dispersion, double slope, double wavelength) noexcept {
  const double k = wavelength / (2.0 * std::numbers::pi * kLightNmPerPs);
  return k * k * (wavelength * wavelength * slope + 2.0 * wavelength * dispersion);
}

double wavelength_nm(double center_frequency_hz) noexcept {
  return kSpeedOfLight / center_frequency_hz * 1e9;
}

ComplexSignal set_launch_power(const ComplexSignal& sig, double p_dbm) {
  const double p0 = sig.mean_power();
  require(p0 > 0.0 && std::isfinite(p0), ErrorCode::ZeroPower, "set_launch_power: zero-power input");
  const double target = std::pow(10.0, (p_dbm - 30.0) / 10.0);
  const double scale = std::sqrt(target / p0);
  ComplexSignal out = sig;
  for (auto& v : out.samples) v *= scale;
  return out;
}

namespace {

double quantize(double x, double clip, double step, long levels) {
  const double c = std::clamp(x, -clip, clip);
  auto idx = static_cast<long>(std::floor((c + clip) / step));
  idx = std::clamp(idx, 0L, levels - 1);
  return -clip + (static_cast<double>(idx) + 0.5) * step;
}

}  // namespace

ComplexSignal dac_adc(const ComplexSignal& sig, const ConverterParams& cv) {
  cv.validate();
  require(!sig.samples.empty(), ErrorCode::ZeroPower, "dac_adc: empty signal");
  double pi = 0.0, pq = 0.0;
  for (const auto& v : sig.samples) {
    pi += v.real() * v.real();
    pq += v.imag() * v.imag();
  }
  const auto n = static_cast<double>(sig.size());
  const double sigma_i = std::sqrt(pi / n);
  const double sigma_q = std::sqrt(pq / n);
  require(sigma_i > 0.0 || sigma_q > 0.0, ErrorCode::ZeroPower, "dac_adc: all-zero input");

  const double ratio = std::pow(10.0, cv.clipping_ratio_db / 20.0);
  const long levels = 1L << cv.resolution_bits;
  const double clip_i = ratio * sigma_i;
  const double clip_q = ratio * sigma_q;
  const double step_i = 2.0 * clip_i / static_cast<double>(levels);
  const double step_q = 2.0 * clip_q / static_cast<double>(levels);

  ComplexSignal out = sig;
  for (auto& v : out.samples) {
    const double re = sigma_i > 0.0 ? quantize(v.real(), clip_i, step_i, levels) : 0.0;
    const double im = sigma_q > 0.0 ? quantize(v.imag(), clip_q, step_q, levels) : 0.0;
    v = {re, im};
  }
  const double p_out = out.mean_power();
  if (p_out > 0.0) {
    const double scale = std::sqrt(sig.mean_power() / p_out);
    for (auto& v : out.samples) v *= scale;
  }
  return out;
}

namespace detail {

void linear_response(std::span<cplx> out, double sample_rate, double beta2, double beta3,
                     double alpha_field, double z_km, double scale) {
  const std::size_t n = out.size();
  const double rate_thz = sample_rate * 1e-12;
  const double gain = scale * std::exp(-alpha_field * z_km);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = bin_angular_frequency(k, n, rate_thz);
    const double phase = z_km * (0.5 * beta2 * w * w - beta3 * w * w * w / 6.0);
    out[k] = gain * cplx(std::cos(phase), std::sin(phase));
  }
}

void split_step(std::span<cplx> field, double sample_rate, double center_frequency,
                const FiberParams& fiber, int n_steps, Direction dir) {
  require(n_steps >= 1, ErrorCode::InvalidArgument, "split-step needs at least one step");
  const std::size_t n = field.size();
  const double lambda = wavelength_nm(center_frequency);
  const double b2 = beta2_from_dispersion(fiber.dispersion, lambda);
  const double b3 = beta3_from_slope(fiber.dispersion, fiber.slope, lambda);
  const double h = fiber.length_km / n_steps;
  const double sign = dir == Direction::Forward ? 1.0 : -1.0;
  const double inv_n = 1.0 / static_cast<double>(n);

  // Inverse operators: negate z in the linear exponent and the Kerr phase.
  std::vector<cplx> half(n), full(n);
  linear_response(half, sample_rate, b2, b3, fiber.alpha_field(), sign * 0.5 * h, inv_n);
  linear_response(full, sample_rate, b2, b3, fiber.alpha_field(), sign * h, inv_n);
  const double kerr = sign * fiber.gamma * h;

  const Fft fft(n);
  fft.forward(field);
  kernels::spectral_multiply_parallel(field, half);
  for (int s = 0; s < n_steps; ++s) {
    fft.inverse(field);
    if (kerr != 0.0) kernels::kerr_phase_parallel(field, kerr);
    fft.forward(field);
    kernels::spectral_multiply_parallel(field, s + 1 < n_steps ? std::span<const cplx>(full)
                                                               : std::span<const cplx>(half));
  }
  fft.inverse(field);
}

}  // namespace detail

ComplexSignal ssfm_propagate(const ComplexSignal& sig, const FiberParams& fiber, int n_steps) {
  require(n_steps >= 1, ErrorCode::InvalidArgument, "ssfm_propagate: n_steps must be >= 1");
  fiber.validate();
  sig.validate();
  ComplexSignal out = sig;
  detail::split_step(out.samples, sig.sample_rate, sig.center_frequency, fiber, n_steps,
                     detail::Direction::Forward);
  return out;
}

double ase_power(const AmplifierParams& amp, double center_frequency, double bandwidth) noexcept {
  const double g = std::pow(10.0, amp.gain_db / 10.0);
  return amp.spontaneous_emission_factor() * kPlanck * center_frequency * (g - 1.0) * bandwidth;
}

ComplexSignal edfa_amplify(const ComplexSignal& sig, const AmplifierParams& amp, Rng& rng,
                           std::optional<double> noise_bandwidth) {
  amp.validate();
  const double g = std::pow(10.0, amp.gain_db / 10.0);
  const double root_g = std::sqrt(g);
  const double p_ase = ase_power(amp, sig.center_frequency, noise_bandwidth.value_or(sig.sample_rate));
  ComplexSignal out = sig;
  for (auto& v : out.samples) {
    v *= root_g;
    if (p_ase > 0.0) v += rng.complex_gaussian(p_ase);
  }
  return out;
}

ComplexSignal propagate_link(const ComplexSignal& sig, const LinkConfig& link, Rng& rng) {
  link.validate();
  sig.validate();
  const AmplifierParams amp = link.amplifier();
  ComplexSignal cur = sig;
  for (int span = 0; span < link.n_spans; ++span) {
    detail::split_step(cur.samples, cur.sample_rate, cur.center_frequency, link.fiber,
                       link.steps_per_span, detail::Direction::Forward);
    if (link.ase_enabled) {
      cur = edfa_amplify(cur, amp, rng);
    } else {
      const double root_g = std::pow(10.0, amp.gain_db / 20.0);
      for (auto& v : cur.samples) v *= root_g;
    }
  }
  require(std::isfinite(cur.energy()), ErrorCode::NumericalFailure,
          "propagate_link: non-finite field");
  return cur;
}

ComplexSignal propagate_link(const ComplexSignal& sig, const LinkConfig& link) {
  Rng rng(link.rng_seed);
  return propagate_link(sig, link, rng);
}

}  // namespace apnlc
