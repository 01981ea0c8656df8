// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Criterion 6 runs the full desk-scale sweep and dominates
// the runtime.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "apnlc/ap.hpp"
#include "apnlc/config.hpp"
#include "apnlc/dnle.hpp"
#include "apnlc/fcm.hpp"
#include "apnlc/fiber.hpp"
#include "apnlc/kmeans.hpp"
#include "apnlc/metrics.hpp"
#include "apnlc/pipeline.hpp"
#include "apnlc/results.hpp"
#include "support.hpp"

using namespace apnlc;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) {
      pass = false;
      detail += " [fail]";
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------- 1

double best_bipartition_sse(const std::vector<cplx>& pts) {
  const std::size_t n = pts.size();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << (n - 1)); ++mask) {
    cplx sum[2] = {0.0, 0.0};
    std::size_t cnt[2] = {0, 0};
    auto group = [&](std::size_t i) { return i == 0 ? 0u : (mask >> (i - 1)) & 1u; };
    for (std::size_t i = 0; i < n; ++i) {
      sum[group(i)] += pts[i];
      ++cnt[group(i)];
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) sse += std::norm(pts[i] - sum[group(i)] / double(cnt[group(i)]));
    best = std::min(best, sse);
  }
  return best;
}

std::size_t partition_disagreements(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
  std::map<std::size_t, std::map<std::size_t, std::size_t>> table;
  for (std::size_t i = 0; i < x.size(); ++i) ++table[x[i]][y[i]];
  std::size_t agree = 0;
  for (const auto& [_, row] : table) {
    std::size_t best = 0;
    for (const auto& [__, c] : row) best = std::max(best, c);
    agree += best;
  }
  return x.size() - agree;
}

Outcome clustering_oracles() {
  Outcome o;
  int exact = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto pts = test::uniform_points(8, 100 + seed);
    KmeansOptions opts;
    opts.seed = seed;
    const double got = kmeans_cluster(pts, 2, opts).objective;
    const double want = best_bipartition_sse(pts);
    if (std::abs(got - want) <= 1e-12 * std::max(1.0, want)) ++exact;
  }
  o.check(exact == 20, "kmeans optimum " + std::to_string(exact) + "/20");

  const double h = std::numbers::sqrt2 / 2.0;
  const std::array<cplx, 4> qpsk = {cplx(h, h), cplx(-h, h), cplx(-h, -h), cplx(h, -h)};
  const auto blobs = test::gaussian_blobs(qpsk, 100, 0.02, 17);
  const ClusterModel ap = ap_cluster(blobs, 4);
  std::vector<std::size_t> order(blobs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), std::mt19937_64(23));
  std::vector<cplx> cand;
  for (std::size_t i = 0; i < 40; ++i) cand.push_back(blobs[order[i]]);
  double best = std::numeric_limits<double>::infinity();
  std::array<std::size_t, 4> best_set{};
  for (std::size_t a = 0; a < 40; ++a)
    for (std::size_t b = a + 1; b < 40; ++b)
      for (std::size_t c = b + 1; c < 40; ++c)
        for (std::size_t d = c + 1; d < 40; ++d) {
          double cost = 0.0;
          for (const cplx x : cand)
            cost += std::min({std::norm(x - cand[a]), std::norm(x - cand[b]), std::norm(x - cand[c]),
                              std::norm(x - cand[d])});
          if (cost < best) {
            best = cost;
            best_set = {a, b, c, d};
          }
        }
  std::vector<std::size_t> medoid(blobs.size());
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < 4; ++j)
      if (const double dd = std::norm(blobs[i] - cand[best_set[j]]); dd < dmin) {
        dmin = dd;
        medoid[i] = j;
      }
  }
  const std::size_t bad =
      std::max(partition_disagreements(ap.assignment, medoid), partition_disagreements(medoid, ap.assignment));
  o.check(bad == 0, "ap vs k-medoids " + std::to_string(bad) + " disagreeing");

  double worst = -std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    FcmOptions opts;
    opts.seed = seed;
    opts.keep_history = true;
    const FcmResult r = fcm_run(test::uniform_points(60, 300 + seed), 4, opts);
    for (std::size_t t = 1; t < r.objective_history.size(); ++t)
      worst = std::max(worst, r.objective_history[t] - r.objective_history[t - 1]);
  }
  o.check(worst <= 1e-12, "fcm max rise " + fmt("%.3g", worst));
  return o;
}

// ---------------------------------------------------------------- 2

Outcome ap_equations() {
  Outcome o;
  double err = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = similarity_matrix(test::uniform_points(20, seed), MedianPreference{});
    ApState st(20, 0.0);
    ap_iterate(st, s);
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t k = 0; k < 20; ++k) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t kk = 0; kk < 20; ++kk)
          if (kk != k) m = std::max(m, s(i, kk));
        err = std::max(err, std::abs(st.R(i, k) - (s(i, k) - m)));
      }
  }
  o.check(err <= 1e-12, "first sweep max error " + fmt("%.3g", err));

  const auto s = similarity_matrix(test::uniform_points(60, 3), MedianPreference{});
  ApState st(60, 0.5);
  double peak = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < 500; ++it) {
    ap_iterate(st, s);
    for (std::size_t i = 0; i < 60; ++i)
      for (std::size_t k = 0; k < 60; ++k)
        if (i != k) peak = std::max(peak, st.A(i, k));
  }
  o.check(peak <= 0.0, "max off-diagonal A over 500 sweeps " + fmt("%.3g", peak));
  return o;
}

// ---------------------------------------------------------------- 3

ComplexSignal constant(std::size_t n, double power, double rate) {
  ComplexSignal s;
  s.samples.assign(n, cplx(std::sqrt(power), 0.0));
  s.sample_rate = rate;
  s.center_frequency = kDefaultCarrierHz;
  return s;
}

Outcome physics_oracles() {
  Outcome o;
  FiberParams spm;
  spm.dispersion = 0.0;
  spm.slope = 0.0;
  spm.alpha_db = 0.0;
  const ComplexSignal cw = ssfm_propagate(constant(1024, 10e-3, 25e9), spm, 40);
  double phase_err = 0.0;
  for (const cplx v : cw.samples) phase_err = std::max(phase_err, std::abs(std::arg(v) - 1.1));
  o.check(phase_err <= 1e-9, "spm phase error " + fmt("%.3g", phase_err) + " rad");

  FiberParams disp;
  disp.gamma = 0.0;
  disp.alpha_db = 0.0;
  disp.slope = -2.0 * disp.dispersion / 1550.0;
  const std::size_t n = 8192;
  const double t0 = 30.0;
  ComplexSignal pulse = constant(n, 0.0, 1e12);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = double(i) - double(n / 2);
    pulse.samples[i] = std::exp(-t * t / (2.0 * t0 * t0));
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
  const double b2l = beta2_from_dispersion(disp.dispersion, 1550.0) * disp.length_km;
  const double want = std::sqrt(1.0 + std::pow(b2l / (t0 * t0), 2));
  const double got = rms_width(ssfm_propagate(pulse, disp, 40)) / rms_width(pulse);
  const double rel = std::abs(got / want - 1.0);
  o.check(rel < 5e-3, "gaussian broadening off by " + fmt("%.3g", 100 * rel) + "%");

  FiberParams lossless;
  lossless.alpha_db = 0.0;
  const ComplexSignal x = test::bandlimited_noise(1 << 14, 0.3, 20e-3, 3);
  const double drift = std::abs(ssfm_propagate(x, lossless, 40).energy() / x.energy() - 1.0);
  o.check(drift <= 1e-9, "energy drift " + fmt("%.3g", drift));

  AmplifierParams amp;
  Rng rng(5);
  const double p_ase = edfa_amplify(constant(1'000'000, 0.0, 25e9), amp, rng).mean_power();
  const double nsp = amp.spontaneous_emission_factor();
  const double g = std::pow(10.0, amp.gain_db / 10.0);
  const double expect = nsp * kPlanck * kDefaultCarrierHz * (g - 1.0) * 25e9;
  const double ase_rel = std::abs(p_ase / expect - 1.0);
  o.check(ase_rel < 0.02, "ase power off by " + fmt("%.3g", 100 * ase_rel) + "%");
  return o;
}

// ---------------------------------------------------------------- 4

Outcome dbp_inversion() {
  Outcome o;
  LinkConfig link;
  link.ase_enabled = false;
  link.steps_per_span = 40;
  const ComplexSignal x = set_launch_power(test::bandlimited_noise(1 << 14, 0.3, 1.0, 1), 4.0);
  DbpConfig d;
  d.link = link;
  d.steps_per_span = 40;
  const double err = test::max_relative_error(dbp_equalize(propagate_link(x, link), d).samples, x.samples);
  o.check(err < 1e-6, "8x100 km inversion error " + fmt("%.3g", err));

  LinkConfig linear = link;
  linear.fiber.gamma = 0.0;
  const ComplexSignal z = set_launch_power(test::bandlimited_noise(1 << 15, 0.25, 1.0, 2), 0.0);
  const ComplexSignal y = propagate_link(z, linear);
  d.link = linear;
  CdcParams c = cdc_for_link(linear);
  const auto by_dbp = dbp_equalize(y, d);
  const auto by_vol = volterra_equalize(y, VolterraConfig{linear});
  const auto by_cdc = cd_compensate(y, c);
  const double e1 = test::max_relative_error(by_vol.samples, by_dbp.samples);
  const double e2 = test::max_relative_error(by_cdc.samples, by_dbp.samples);
  o.check(std::max(e1, e2) <= 1e-9, "gamma=0 volterra/cdc vs dbp " + fmt("%.3g", e1) + "/" + fmt("%.3g", e2));
  return o;
}

// ---------------------------------------------------------------- 5

Outcome metric_goldens() {
  Outcome o;
  const double q6 = q_factor_from_ber(0.0227501).q_db;
  const double q98 = q_factor_from_ber(1e-3).q_db;
  o.check(std::abs(q6 - 6.0206) <= 1e-3, "Q(0.0227501) = " + fmt("%.5f", q6) + " dB");
  o.check(std::abs(q98 - 9.80) <= 1e-2, "Q(1e-3) = " + fmt("%.4f", q98) + " dB");

  bool exact = true;
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1000 + 997 * static_cast<std::size_t>(trial);
    std::vector<std::uint8_t> tx(n), rx(n);
    for (auto& b : tx) b = rng.uniform() < 0.5;
    rx = tx;
    std::size_t flips = 0;
    for (std::size_t i = static_cast<std::size_t>(trial); i < n; i += 13 + static_cast<std::size_t>(trial)) {
      rx[i] ^= 1;
      ++flips;
    }
    const ErrorCount c = count_errors(tx, rx);
    exact = exact && c.errors == flips && c.bits == n && c.ber == double(flips) / double(n);
  }
  o.check(exact, exact ? "count_errors exact on 20 streams" : "count_errors mismatch");
  return o;
}

// ---------------------------------------------------------------- 6

struct TrendData {
  std::vector<double> powers;
  // [seed][power] -> Q dB
  std::map<int, std::vector<double>> none, ap, kmeans;
};

Outcome trend_reproduction(double& seconds_out) {
  const auto t0 = std::chrono::steady_clock::now();
  TrendData d;
  for (double p = -4.0; p <= 8.0; p += 2.0) d.powers.push_back(p);
  const std::vector<Equalizer> methods = {Equalizer::NONE, Equalizer::AP, Equalizer::KMEANS};
  RunConfig cfg;
  cfg.format = Format::QAM16;
  cfg.nle.ap.max_points = 400;
  for (int seed = 1; seed <= 3; ++seed) {
    cfg.seed = static_cast<std::uint64_t>(seed);
    const SweepResult r = sweep_lop(cfg, d.powers, methods);
    for (const auto& row : r.rows) {
      auto& dst = row.equalizer == Equalizer::NONE ? d.none : row.equalizer == Equalizer::AP ? d.ap : d.kmeans;
      dst[seed].push_back(row.report.q.q_db);
    }
    std::printf("  seed %d:", seed);
    for (std::size_t i = 0; i < d.powers.size(); ++i)
      std::printf(" %+g dBm none %.2f ap %.2f kmeans %.2f |", d.powers[i], d.none[seed][i], d.ap[seed][i],
                  d.kmeans[seed][i]);
    std::printf("\n");
    std::fflush(stdout);
  }
  seconds_out = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Outcome o;
  const std::size_t np = d.powers.size();
  int unimodal = 0;
  for (int seed = 1; seed <= 3; ++seed) {
    const auto& q = d.none[seed];
    const auto peak = static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
    bool single = peak > 0 && peak + 1 < np;
    for (std::size_t i = 1; i < np && single; ++i)
      if (i <= peak ? !(q[i] > q[i - 1]) : !(q[i] < q[i - 1])) single = false;
    if (single) ++unimodal;
  }
  o.check(unimodal == 3, "(a) NONE single interior maximum for " + std::to_string(unimodal) + "/3 seeds");

  std::vector<double> mean_none(np, 0.0);
  for (int seed = 1; seed <= 3; ++seed)
    for (std::size_t i = 0; i < np; ++i) mean_none[i] += d.none[seed][i] / 3.0;
  const auto opt = static_cast<std::size_t>(std::max_element(mean_none.begin(), mean_none.end()) - mean_none.begin());
  double worst_gain = std::numeric_limits<double>::infinity();
  for (std::size_t i = opt; i < np; ++i) {
    std::array<double, 3> g{};
    for (int seed = 1; seed <= 3; ++seed) g[seed - 1] = d.ap[seed][i] - d.none[seed][i];
    std::sort(g.begin(), g.end());
    worst_gain = std::min(worst_gain, g[1]);
  }
  o.check(worst_gain >= 0.5, "(b) min over P >= " + fmt("%+g", d.powers[opt]) +
                                 " dBm of median Q(AP)-Q(NONE) = " + fmt("%+.2f", worst_gain) + " dB");

  int ap_wins = 0;
  for (int seed = 1; seed <= 3; ++seed)
    if (d.ap[seed][np - 1] >= d.kmeans[seed][np - 1]) ++ap_wins;
  o.check(ap_wins >= 2, "(c) Q(AP) >= Q(KMEANS) at " + fmt("%+g", d.powers.back()) + " dBm for " +
                            std::to_string(ap_wins) + "/3 seeds");
  return o;
}

// ---------------------------------------------------------------- 7

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  RunConfig cfg = parse_config(
      "link.n_spans = 2\n"
      "ofdm.n_symbols = 104\n"
      "run.n_frames = 1\n"
      "run.seed = 7\n");
  const std::vector<double> powers = {-2.0, 4.0};
  const std::vector<Equalizer> methods = {Equalizer::NONE, Equalizer::AP,  Equalizer::KMEANS,
                                          Equalizer::FCM,  Equalizer::DBP, Equalizer::VOLTERRA};
  const auto base = std::filesystem::temp_directory_path() / "apnlc_acceptance_determinism";
  std::filesystem::remove_all(base);
  write_results(sweep_lop(cfg, powers, methods), base / "a");
  write_results(sweep_lop(cfg, powers, methods), base / "b");
  const std::string a = slurp(base / "a" / "sweep.csv");
  const std::string b = slurp(base / "b" / "sweep.csv");
  o.check(!a.empty() && a == b, "sweep.csv " + std::to_string(a.size()) + " bytes, " +
                                    (a == b ? std::string("identical") : std::string("different")));
  std::filesystem::remove_all(base);
  return o;
}

}  // namespace

int main() {
  setvbuf(stdout, nullptr, _IOLBF, 0);
  std::printf("acceptance suite, %d OpenMP thread(s)\n", omp_get_max_threads());
  int failures = 0;
  auto run = [&](int id, const char* name, double limit_s, const std::function<Outcome()>& fn) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0.0) o.check(secs < limit_s, "runtime " + fmt("%.1f", secs) + " s < " + fmt("%g", limit_s) + " s");
    else o.detail += "; runtime " + fmt("%.1f", secs) + " s";
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  };
  run(1, "clustering vs oracles", 60.0, clustering_oracles);
  run(2, "AP message equations", 0.0, ap_equations);
  run(3, "physics oracles", 120.0, physics_oracles);
  run(4, "DBP inversion and linear agreement", 0.0, dbp_inversion);
  run(5, "metric golden values", 0.0, metric_goldens);
  double sweep_s = 0.0;
  run(6, "desk-scale trend", 0.0, [&] { return trend_reproduction(sweep_s); });
  run(7, "end-to-end determinism", 0.0, determinism);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
