#include <doctest.h>

#include <numbers>

#include "apnlc/error.hpp"
#include "apnlc/fiber.hpp"
#include "support.hpp"

using namespace apnlc;

namespace {

ComplexSignal constant(std::size_t n, double power, double rate = 25e9) {
  ComplexSignal s;
  s.samples.assign(n, cplx(std::sqrt(power), 0.0));
  s.sample_rate = rate;
  s.center_frequency = kDefaultCarrierHz;
  return s;
}

}  // namespace

TEST_CASE("dispersion conversions") {
  const double b2 = beta2_from_dispersion(16.0, 1550.0);
  CHECK(b2 == doctest::Approx(-16.0 * 1550.0 * 1550.0 / (2.0 * std::numbers::pi * 2.99792458e5)).epsilon(1e-15));
  CHECK(b2 == doctest::Approx(-20.41).epsilon(1e-3));
  CHECK(beta3_from_slope(16.0, 0.06, 1550.0) == doctest::Approx(0.1312).epsilon(2e-3));
  CHECK(wavelength_nm(kDefaultCarrierHz) == doctest::Approx(1550.0).epsilon(1e-12));
  const FiberParams f;
  CHECK(f.effective_length() == doctest::Approx((1.0 - std::exp(-0.2 * std::log(10.0) / 10.0 * 100.0)) /
                                                (0.2 * std::log(10.0) / 10.0)));
}

TEST_CASE("launch power") {
  auto s = test::bandlimited_noise(4096, 0.2, 1.0, 1);
  CHECK(set_launch_power(s, 3.0).mean_power() == doctest::Approx(std::pow(10.0, -2.7)).epsilon(1e-12));
  CHECK_THROWS_AS(set_launch_power(constant(16, 0.0), 0.0), Error);
}

TEST_CASE("spm only: exact nonlinear phase") {
  FiberParams f;
  f.dispersion = 0.0;
  f.slope = 0.0;
  f.alpha_db = 0.0;
  // gamma 1.1, 10 mW, 100 km -> 1.1 rad
  const ComplexSignal cw = constant(1024, 10e-3);
  const ComplexSignal out = ssfm_propagate(cw, f, 40);
  for (std::size_t i = 0; i < out.size(); i += 97) {
    CHECK(std::abs(std::arg(out.samples[i]) - 1.1) < 1e-9);
    CHECK(std::abs(std::abs(out.samples[i]) - std::sqrt(10e-3)) < 1e-12);
  }
  // arbitrary input: shape unchanged, phase follows |A|^2
  const ComplexSignal x = test::bandlimited_noise(2048, 0.3, 5e-3, 2);
  const ComplexSignal y = ssfm_propagate(x, f, 7);
  double err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const cplx want = x.samples[i] * std::polar(1.0, 1.1 * std::norm(x.samples[i]) * 100.0);
    err = std::max(err, std::abs(y.samples[i] - want) / std::abs(x.samples[i]));
  }
  CHECK(err < 1e-9);
}

TEST_CASE("dispersion only: gaussian pulse broadening") {
  FiberParams f;
  f.gamma = 0.0;
  f.alpha_db = 0.0;
  f.slope = -2.0 * f.dispersion / 1550.0;  // beta3 = 0
  const double rate = 1e12;                  // 1 ps grid
  const std::size_t n = 8192;
  const double t0 = 30.0;
  ComplexSignal s = constant(n, 0.0, rate);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = double(i) - double(n / 2);
    s.samples[i] = std::exp(-t * t / (2.0 * t0 * t0));
  }
  const auto rms_width = [](const ComplexSignal& x) {
    double m0 = 0, m1 = 0, m2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double p = std::norm(x.samples[i]);
      m0 += p;
      m1 += p * double(i);
      m2 += p * double(i) * double(i);
    }
    return std::sqrt(m2 / m0 - (m1 / m0) * (m1 / m0));
  };
  const ComplexSignal out = ssfm_propagate(s, f, 40);
  const double b2l = beta2_from_dispersion(f.dispersion, 1550.0) * f.length_km;
  const double ratio = std::sqrt(1.0 + std::pow(b2l / (t0 * t0), 2));
  CHECK(rms_width(out) / rms_width(s) == doctest::Approx(ratio).epsilon(5e-3));
}

TEST_CASE("lossless propagation conserves energy") {
  FiberParams f;
  f.alpha_db = 0.0;
  const ComplexSignal x = test::bandlimited_noise(1 << 14, 0.3, 20e-3, 3);
  const ComplexSignal y = ssfm_propagate(x, f, 40);
  CHECK(std::abs(y.energy() / x.energy() - 1.0) < 1e-9);
  FiberParams lossy;
  const ComplexSignal z = ssfm_propagate(x, lossy, 40);
  CHECK(z.energy() / x.energy() == doctest::Approx(std::pow(10.0, -2.0)).epsilon(1e-9));
}

TEST_CASE("ase spectral density and power") {
  AmplifierParams amp;
  const double nsp = std::pow(10.0, 0.55) / 2.0;
  const double density = nsp * kPlanck * 193.4e12 * 99.0;
  CHECK(density == doctest::Approx(2.25e-17).epsilon(5e-3));
  const double p = ase_power(amp, kDefaultCarrierHz, 25e9);
  CHECK(p == doctest::Approx(nsp * kPlanck * kDefaultCarrierHz * 99.0 * 25e9).epsilon(1e-12));

  Rng rng(5);
  const ComplexSignal out = edfa_amplify(constant(1'000'000, 0.0), amp, rng);
  CHECK(out.mean_power() == doctest::Approx(p).epsilon(0.02));
  Rng rng2(6);
  const ComplexSignal sig = constant(1000, 1e-3);
  const ComplexSignal gained = edfa_amplify(sig, amp, rng2, 0.0);
  CHECK(gained.mean_power() == doctest::Approx(0.1).epsilon(1e-12));

  AmplifierParams bad;
  bad.noise_figure_db = 2.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.enforce_quantum_limit = false;
  CHECK_NOTHROW(bad.validate());
}

TEST_CASE("ase accumulates linearly over spans") {
  LinkConfig link;
  link.n_spans = 4;
  link.fiber.gamma = 0.0;
  Rng rng(7);
  const ComplexSignal out = propagate_link(constant(1 << 18, 0.0), link, rng);
  const double single = ase_power(link.amplifier(), kDefaultCarrierHz, 25e9);
  CHECK(out.mean_power() == doctest::Approx(4.0 * single).epsilon(0.03));
}

TEST_CASE("one transparent span returns the dispersed input at the input power") {
  LinkConfig link;
  link.n_spans = 1;
  link.fiber.gamma = 0.0;
  link.ase_enabled = false;
  const ComplexSignal x = test::bandlimited_noise(4096, 0.3, 1e-3, 8);
  const ComplexSignal y = propagate_link(x, link);
  CHECK(std::abs(y.mean_power() / x.mean_power() - 1.0) < 1e-9);
}

TEST_CASE("dac/adc clipping and quantization") {
  const std::size_t n = 2'000'000;
  Rng rng(12);
  ComplexSignal s = constant(n, 0.0);
  for (auto& v : s.samples) v = rng.complex_gaussian(2.0);
  ConverterParams cv;
  const ComplexSignal q = dac_adc(s, cv);
  CHECK(q.mean_power() == doctest::Approx(s.mean_power()).epsilon(1e-12));

  const double peak_in = std::pow(10.0, 13.0 / 20.0);  // rails have unit variance
  double peak = 0.0;
  for (auto v : q.samples) peak = std::max({peak, std::abs(v.real()), std::abs(v.imag())});
  std::size_t extreme = 0;
  for (auto v : q.samples) extreme += (std::abs(v.real()) > 0.999 * peak) + (std::abs(v.imag()) > 0.999 * peak);
  // Outer levels collect everything beyond the last threshold, A - step.
  const double step = 2.0 * peak_in / 1024.0;
  const double lambda = 2.0 * double(n) * std::erfc((peak_in - step) / std::sqrt(2.0));
  CHECK(std::erfc(peak_in / std::sqrt(2.0)) == doctest::Approx(7.6e-6).epsilon(0.02));
  CHECK(std::abs(double(extreme) - lambda) < 5.0 * std::sqrt(lambda) + 1.0);

  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) err += std::norm(q.samples[i] - s.samples[i]);
  // step^2 / 12 per rail, two rails
  CHECK(err / double(n) == doctest::Approx(2.0 * step * step / 12.0).epsilon(0.05));
}
