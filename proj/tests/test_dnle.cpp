#include <doctest.h>

#include "apnlc/config.hpp"
#include "apnlc/dnle.hpp"
#include "apnlc/pipeline.hpp"
#include "apnlc/error.hpp"
#include "apnlc/metrics.hpp"
#include "support.hpp"

using namespace apnlc;

namespace {

LinkConfig quiet_link(int spans, double gamma) {
  LinkConfig l;
  l.n_spans = spans;
  l.fiber.gamma = gamma;
  l.ase_enabled = false;
  l.steps_per_span = 20;
  return l;
}

double relative_rms(const ComplexSignal& got, const ComplexSignal& want) {
  double e = 0.0, p = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    e += std::norm(got.samples[i] - want.samples[i]);
    p += std::norm(want.samples[i]);
  }
  return std::sqrt(e / p);
}

ComplexSignal launch(const ComplexSignal& s, double dbm) { return set_launch_power(s, dbm); }

}  // namespace

TEST_CASE("back-propagation inverts the noiseless link") {
  const auto x = launch(test::bandlimited_noise(1 << 14, 0.3, 1.0, 1), 4.0);
  const LinkConfig link = quiet_link(2, 1.1);
  const auto y = propagate_link(x, link);
  DbpConfig d;
  d.link = link;
  d.steps_per_span = link.steps_per_span;
  const auto z = dbp_equalize(y, d);
  CHECK(test::max_relative_error(z.samples, x.samples) < 1e-6);
  // the uncompensated output is far from the input
  CHECK(test::max_relative_error(y.samples, x.samples) > 0.1);
}

TEST_CASE("without nonlinearity the three equalizers coincide") {
  const auto x = launch(test::bandlimited_noise(1 << 15, 0.25, 1.0, 2), 0.0);
  const LinkConfig link = quiet_link(8, 0.0);
  const auto y = propagate_link(x, link);
  DbpConfig d;
  d.link = link;
  d.steps_per_span = 4;
  VolterraConfig v{link};
  CdcParams c = cdc_for_link(link);
  c.block_size = 1 << 15;
  const auto by_dbp = dbp_equalize(y, d);
  const auto by_volterra = volterra_equalize(y, v);
  const auto by_cdc = cd_compensate_monolithic(y, c);
  CHECK(test::max_relative_error(by_volterra.samples, by_dbp.samples) < 1e-9);
  CHECK(test::max_relative_error(by_cdc.samples, by_dbp.samples) < 1e-9);
  CHECK(test::max_relative_error(by_dbp.samples, x.samples) < 1e-9);
}

TEST_CASE("overlap-save matches the whole-frame filter") {
  const auto x = test::bandlimited_noise(1 << 17, 0.45, 1.0, 3);
  const CdcParams c = cdc_for_link(quiet_link(8, 0.0));
  const auto a = cd_compensate(x, c);
  const auto b = cd_compensate_monolithic(x, c);
  CHECK(test::max_relative_error(a.samples, b.samples) < 1e-10);

  CdcParams small = c;
  small.block_size = 256;
  CHECK_THROWS_AS(cd_compensate(x, small), Error);
  try {
    cd_compensate(x, small);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Aliasing);
  }
}

TEST_CASE("compensator response and memory") {
  CdcParams none;
  const auto x = test::bandlimited_noise(1 << 12, 0.25, 1.0, 4);
  const auto y = cd_compensate(x, none);
  CHECK(test::max_relative_error(y.samples, x.samples) < 1e-12);

  const CdcParams c = cdc_for_link(quiet_link(8, 0.0));
  CHECK(c.accumulated_dispersion == doctest::Approx(12800.0));
  std::vector<cplx> h(4096);
  cdc_response(h, 25e9, kDefaultCarrierHz, c);
  for (std::size_t k = 0; k < 1000; ++k) CHECK(std::abs(std::abs(h[k]) - 1.0) < 1e-12);
  CHECK(std::abs(h[2048]) < 1e-6);
  CHECK(cdc_memory(25e9, kDefaultCarrierHz, c) > cdc_memory(25e9, kDefaultCarrierHz, cdc_for_link(quiet_link(1, 0.0))));
}

TEST_CASE("a 100 km span and its compensator are an inverse pair") {
  const auto x = test::bandlimited_noise(1 << 14, 0.25, 1e-3, 5);
  FiberParams f;
  f.gamma = 0.0;
  f.alpha_db = 0.0;
  const auto y = ssfm_propagate(x, f, 1);
  LinkConfig l = quiet_link(1, 0.0);
  l.fiber = f;
  CdcParams c = cdc_for_link(l);
  c.block_size = 1 << 14;
  const auto z = cd_compensate_monolithic(y, c);
  CHECK(test::max_relative_error(z.samples, x.samples) < 1e-9);
}

TEST_CASE("back-propagation and Volterra beat linear compensation at high power") {
  const auto x = launch(test::bandlimited_noise(1 << 14, 0.2, 1.0, 6), 6.0);
  const LinkConfig link = quiet_link(8, 1.1);
  const auto y = propagate_link(x, link);
  CdcParams c = cdc_for_link(link);
  c.block_size = 1 << 14;
  DbpConfig d;
  d.link = link;
  d.steps_per_span = link.steps_per_span;
  CHECK(relative_rms(dbp_equalize(y, d), x) < 1e-6);
  CHECK(relative_rms(cd_compensate_monolithic(y, c), x) > 0.5);
}

TEST_CASE("Volterra lowers EVM on a noiseless 16-QAM link at +6 dBm") {
  RunConfig cfg = parse_config(
      "ofdm.n_symbols = 24\n"
      "run.n_frames = 1\n"
      "link.launch_power_dbm = 6\n"
      "link.ase.enabled = false\n"
      "link.converters.enabled = false\n");
  cfg.equalizer = Equalizer::NONE;
  const QualityReport lin = run_once(cfg);
  cfg.equalizer = Equalizer::VOLTERRA;
  const QualityReport vol = run_once(cfg);
  MESSAGE("EVM linear " << lin.evm_percent << " volterra " << vol.evm_percent);
  CHECK(vol.evm_percent < lin.evm_percent);
}

TEST_CASE("single-span Volterra removes most of the self-phase distortion") {
  const auto x = launch(test::bandlimited_noise(1 << 14, 0.2, 1.0, 7), 2.0);
  const LinkConfig link = quiet_link(1, 1.1);
  const auto y = propagate_link(x, link);
  CdcParams c = cdc_for_link(link);
  c.block_size = 1 << 14;
  const double e_cdc = relative_rms(cd_compensate_monolithic(y, c), x);
  const double e_vol = relative_rms(volterra_equalize(y, VolterraConfig{link}), x);
  MESSAGE("cdc " << e_cdc << " volterra " << e_vol);
  CHECK(e_vol < 0.01);
  CHECK(e_vol < 0.25 * e_cdc);
}

TEST_CASE("back-propagation cannot undo amplifier noise") {
  const auto x = launch(test::bandlimited_noise(1 << 13, 0.3, 1.0, 8), 0.0);
  double last = 0.0;
  for (int spans : {1, 4}) {
    LinkConfig link = quiet_link(spans, 1.1);
    link.ase_enabled = true;
    Rng rng(9);
    const auto y = propagate_link(x, link, rng);
    DbpConfig d;
    d.link = link;
    d.steps_per_span = link.steps_per_span;
    const double e = relative_rms(dbp_equalize(y, d), x);
    CHECK(e > 1e-3);
    CHECK(e > last);
    last = e;
  }
}
