#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "apnlc/config.hpp"
#include "apnlc/error.hpp"
#include "apnlc/results.hpp"

using namespace apnlc;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;  // sentinel: no throw
}

RunConfig small_config(bool bypass) {
  RunConfig c = parse_config(
      "ofdm.n_symbols = 400\n"
      "run.n_frames = 1\n"
      "run.seed = 5\n");
  c.link_bypass = bypass;
  c.converters_enabled = !bypass;
  return c;
}

std::string first_line(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("defaults and simple keys") {
  const RunConfig d = parse_config("");
  CHECK(d.ofdm.fft_size == 512);
  CHECK(d.link.n_spans == 8);
  CHECK(d.equalizer == Equalizer::NONE);
  const RunConfig c = parse_config(
      "# comment\n"
      "link.launch_power_dbm = 2.5   # trailing\n"
      "run.equalizer = kmeans\n"
      "link.amp.gain_db = 18\n"
      "link.ase.enabled = off\n");
  CHECK(c.link.launch_power_dbm == 2.5);
  CHECK(c.equalizer == Equalizer::KMEANS);
  CHECK(c.link.gain_db.has_value());
  CHECK_FALSE(c.link.ase_enabled);
}

TEST_CASE("serialization round-trips") {
  const RunConfig c = parse_config(
      "link.launch_power_dbm = -3.25\n"
      "run.constellation = qpsk\n"
      "cluster.ap.preference = -0.75\n"
      "ofdm.pilots = none\n"
      "run.common_phase = false\n"
      "run.seed = 123456789\n");
  const std::string text = serialize_config(c);
  CHECK(serialize_config(parse_config(text)) == text);
  CHECK(serialize_config(parse_config(serialize_config(parse_config("")))) == serialize_config(parse_config("")));
}

TEST_CASE("bad input is rejected with a config error") {
  CHECK(code_of("link.unknown = 1\n") == ErrorCode::Config);
  CHECK(code_of("link.wdm.channels = 5\n") == ErrorCode::Config);
  CHECK(code_of("link.n_spans = abc\n") == ErrorCode::Config);
  CHECK(code_of("cluster.ap.damping = 1.0\n") == ErrorCode::Config);
  CHECK(code_of("no equals sign\n") == ErrorCode::Config);
  try {
    parse_config("\n\nlink.bogus = 1\n");
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(parse_equalizer("Volterra") == Equalizer::VOLTERRA);
  CHECK_THROWS_AS(parse_equalizer("rake"), Error);
  CHECK(parse_number_list("-4,-2, 0 ,8") == std::vector<double>{-4, -2, 0, 8});
  CHECK(parse_equalizer_list("none,ap,none").size() == 2);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(std::isinf(parse_double("-inf")));
}

TEST_CASE("identity channel decodes without error for every equalizer") {
  const RunConfig cfg = small_config(true);
  for (const Equalizer e :
       {Equalizer::NONE, Equalizer::AP, Equalizer::KMEANS, Equalizer::FCM, Equalizer::DBP, Equalizer::VOLTERRA}) {
    RunConfig c = cfg;
    c.equalizer = e;
    const QualityReport r = run_once(c);
    CAPTURE(equalizer_name(e));
    CHECK(r.bit_errors == 0);
    CHECK(r.bits_counted == 202u * 396u * 4u);
    CHECK(r.q.flag == QFlag::UpperBound);
  }
}

TEST_CASE("runs are reproducible and the sweep agrees with single runs") {
  RunConfig cfg = small_config(false);
  cfg.link.n_spans = 1;
  cfg.link.launch_power_dbm = 0.0;
  const QualityReport a = run_once(cfg);
  const QualityReport b = run_once(cfg);
  CHECK(a == b);

  const std::vector<double> powers = {0.0, 2.0};
  const std::vector<Equalizer> methods = {Equalizer::NONE, Equalizer::KMEANS};
  const SweepResult s = sweep_lop(cfg, powers, methods);
  REQUIRE(s.rows.size() == 4);
  CHECK(s.rows[0].launch_power_dbm == 0.0);
  CHECK(s.rows[0].equalizer == Equalizer::NONE);
  CHECK(s.rows[0].report == a);
  CHECK(s.rows[3].launch_power_dbm == 2.0);
  CHECK(s.seeds.size() == 2);
  const std::vector<double> dup = {1.0, 1.0};
  CHECK_THROWS_AS(sweep_lop(cfg, dup, methods), Error);

  const auto dir = std::filesystem::temp_directory_path() / "apnlc_results_test";
  std::filesystem::remove_all(dir);
  write_results(s, dir);
  CHECK(first_line(dir / "sweep.csv") == kSweepHeader);
  CHECK(first_line(dir / "timing.csv") == kTimingHeader);
  CHECK(first_line(dir / "seeds.csv") == kSeedHeader);
  const SweepResult back = read_results(dir);
  REQUIRE(back.rows.size() == s.rows.size());
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    CHECK(back.rows[i].report == s.rows[i].report);
    CHECK(back.rows[i].equalizer == s.rows[i].equalizer);
    CHECK(back.rows[i].seed == s.rows[i].seed);
  }
  CHECK(serialize_config(back.config) == serialize_config(s.config));
  std::filesystem::remove_all(dir);
}
