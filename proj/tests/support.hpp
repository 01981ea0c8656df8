#pragma once

#include <cmath>
#include <vector>

#include "apnlc/fft.hpp"
#include "apnlc/rng.hpp"
#include "apnlc/signal.hpp"

namespace test {

using apnlc::cplx;

inline std::vector<cplx> gaussian_blobs(std::span<const cplx> centers, std::size_t per_center, double sigma,
                                        std::uint64_t seed) {
  apnlc::Rng rng(seed);
  std::vector<cplx> out;
  for (std::size_t i = 0; i < per_center; ++i)
    for (const cplx c : centers) out.push_back(c + rng.complex_gaussian(2.0 * sigma * sigma));
  return out;
}

inline std::vector<cplx> uniform_points(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  apnlc::Rng rng(seed);
  std::vector<cplx> out(n);
  for (auto& p : out) p = {scale * (2.0 * rng.uniform() - 1.0), scale * (2.0 * rng.uniform() - 1.0)};
  return out;
}

/// Random complex field restricted to |f| < band * fs (band in (0, 0.5)).
inline apnlc::ComplexSignal bandlimited_noise(std::size_t n, double band, double power, std::uint64_t seed,
                                              double rate = 25e9) {
  apnlc::Rng rng(seed);
  std::vector<cplx> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double idx = k < (n + 1) / 2 ? double(k) : double(k) - double(n);
    if (std::abs(idx) < band * double(n)) x[k] = rng.complex_gaussian(1.0);
  }
  apnlc::Fft(n).inverse(x);
  double p = 0.0;
  for (auto v : x) p += std::norm(v);
  p /= double(n);
  const double s = std::sqrt(power / p);
  for (auto& v : x) v *= s;
  apnlc::ComplexSignal sig;
  sig.samples = std::move(x);
  sig.sample_rate = rate;
  sig.center_frequency = apnlc::kDefaultCarrierHz;
  return sig;
}

inline double max_relative_error(std::span<const cplx> got, std::span<const cplx> want) {
  double peak = 0.0, err = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    peak = std::max(peak, std::abs(want[i]));
    err = std::max(err, std::abs(got[i] - want[i]));
  }
  return err / peak;
}

}  // namespace test
