#pragma once

#include <cstddef>

#include "apnlc/fiber.hpp"

namespace apnlc {

struct DbpConfig {
  int steps_per_span = 40;
  LinkConfig link;
};

/// Full-step back-propagation: spans in reverse order, each undoing the
/// amplifier gain and then integrating the span with negated loss,
/// dispersion and nonlinearity.
ComplexSignal dbp_equalize(const ComplexSignal& sig, const DbpConfig& cfg);

struct VolterraConfig {
  LinkConfig link;
};

/// Inverse Volterra-series equalizer truncated after the cubic term.
///
///   y = H_cd^-1(L) x  -  sum_n H_cd^-1(z_n) [ j gamma L_eff |a_n|^2 a_n ],
///   a_n = H_cd^-1(L - z_n) x
///
/// H_cd^-1(z) undoes the dispersion of z km of fiber, L is the link length
/// and z_n is the loss-weighted nonlinear centroid of span n,
/// z_n = n L_span + int z e^{-a z} dz / int e^{-a z} dz over the span.
/// Span corrections depend only on x and are evaluated independently.
ComplexSignal volterra_equalize(const ComplexSignal& sig, const VolterraConfig& cfg);

struct CdcParams {
  double accumulated_dispersion = 0.0;  // ps/nm
  double accumulated_slope = 0.0;       // ps/nm^2
  /// Overlap-save FFT length; power of two. Half of it is overlap.
  std::size_t block_size = 4096;
  /// One-sided passband edge as a fraction of the sample rate. Inside it
  /// the compensator is exactly the inverse dispersion response; between
  /// the edge and Nyquist it rolls off with an erfc taper so that the
  /// impulse response is short enough for block processing.
  double passband = 0.3;
};

/// Frequency response of the compensator on a length-n DFT grid.
void cdc_response(std::span<cplx> out, double sample_rate, double center_frequency,
                  const CdcParams& p);

/// Samples of the compensator impulse response on either side of t = 0
/// above 1e-11 of its peak, upper bound.
std::size_t cdc_memory(double sample_rate, double center_frequency, const CdcParams& p);

/// Overlap-save dispersion compensation of a periodic frame.
/// Throws Aliasing when block_size < 4 x (2 cdc_memory + 1).
ComplexSignal cd_compensate(const ComplexSignal& sig, const CdcParams& p);

/// The same filter applied with one whole-frame transform.
ComplexSignal cd_compensate_monolithic(const ComplexSignal& sig, const CdcParams& p);

CdcParams cdc_for_link(const LinkConfig& link);

}  // namespace apnlc
