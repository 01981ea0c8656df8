#pragma once

#include <cstdint>
#include <optional>

#include "apnlc/rng.hpp"
#include "apnlc/signal.hpp"

namespace apnlc {

struct FiberParams {
  double gamma = 1.1;          // 1/(W km)
  double dispersion = 16.0;    // ps/(nm km)
  double slope = 0.06;         // ps/(nm^2 km)
  double alpha_db = 0.2;       // dB/km
  double length_km = 100.0;

  void validate() const;
  /// Field attenuation coefficient in 1/km (power loss is 2x this).
  double alpha_field() const noexcept;
  double span_loss_db() const noexcept { return alpha_db * length_km; }
  /// (1 - exp(-a L)) / a with a the power attenuation; L when lossless.
  double effective_length() const noexcept;
};

struct AmplifierParams {
  double gain_db = 20.0;
  double noise_figure_db = 5.5;
  bool enforce_quantum_limit = true;

  void validate() const;
  double spontaneous_emission_factor() const noexcept;  // 10^(NF/10) / 2
};

struct ConverterParams {
  int resolution_bits = 10;
  double clipping_ratio_db = 13.0;

  void validate() const;
};

struct LinkConfig {
  int n_spans = 8;
  FiberParams fiber;
  AmplifierParams amp;           // gain overwritten by span loss unless gain_db is set
  std::optional<double> gain_db; // explicit override
  ConverterParams converters;
  double launch_power_dbm = 0.0;
  int steps_per_span = 40;
  std::uint64_t rng_seed = 1;
  bool ase_enabled = true;

  void validate() const;
  /// Amplifier parameters with the compensating gain filled in.
  AmplifierParams amplifier() const;
  double total_length_km() const noexcept { return n_spans * fiber.length_km; }
};

// Dispersion conversions. Wavelength in nm, D in ps/(nm km), S in ps/(nm^2 km).
//   beta2 = -D lambda^2 / (2 pi c)                       [ps^2/km]
//   beta3 = (lambda / (2 pi c))^2 (lambda^2 S + 2 lambda D)   [ps^3/km]
// with c = 2.99792458e5 nm/ps.
double beta2_from_dispersion(double dispersion, double wavelength_nm) noexcept;
double beta3_from_slope(double dispersion, double slope, double wavelength_nm) noexcept;
double wavelength_nm(double center_frequency_hz) noexcept;

ComplexSignal set_launch_power(const ComplexSignal& sig, double p_dbm);

/// Per-rail clip to +-A with 20 log10(A/sigma) = clipping ratio, uniform
/// mid-rise quantizer with 2^bits levels over [-A, A], then rescale to the
/// input mean power.
ComplexSignal dac_adc(const ComplexSignal& sig, const ConverterParams& cv);

/// Symmetric split-step solution of
///   dA/dz = -(alpha/2) A - j (beta2/2) d2A/dt2 + (beta3/6) d3A/dt3 + j gamma |A|^2 A
/// over fiber.length_km with n_steps uniform steps. The frame is treated
/// as periodic.
ComplexSignal ssfm_propagate(const ComplexSignal& sig, const FiberParams& fiber, int n_steps);

/// Amplify by sqrt(G) and add circular AWGN of total power
/// n_sp h nu (G - 1) B, single polarization. B defaults to the sample rate.
ComplexSignal edfa_amplify(const ComplexSignal& sig, const AmplifierParams& amp, Rng& rng,
                           std::optional<double> noise_bandwidth = std::nullopt);

double ase_power(const AmplifierParams& amp, double center_frequency, double bandwidth) noexcept;

/// n_spans x (fiber, amplifier).
ComplexSignal propagate_link(const ComplexSignal& sig, const LinkConfig& link, Rng& rng);
ComplexSignal propagate_link(const ComplexSignal& sig, const LinkConfig& link);

namespace detail {

enum class Direction { Forward, Inverse };

/// In-place split-step integration shared by the channel model and the
/// back-propagation equalizer. Inverse applies the exact inverse of the
/// forward sequence (negated operators, same symmetric step layout).
void split_step(std::span<cplx> field, double sample_rate, double center_frequency,
                const FiberParams& fiber, int n_steps, Direction dir);

/// exp(z * L(omega)) for the linear operator over a length z (km) per DFT
/// bin, where L(omega) = -alpha/2 + j beta2 omega^2 / 2 - j beta3 omega^3 / 6
/// (omega in rad/ps, signal synthesized as sum X_k exp(+j omega_k t)).
/// `scale` multiplies every entry.
void linear_response(std::span<cplx> out, double sample_rate, double beta2, double beta3,
                     double alpha_field, double z_km, double scale = 1.0);

}  // namespace detail

}  // namespace apnlc
