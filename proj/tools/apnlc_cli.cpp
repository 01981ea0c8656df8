// apnlc command-line driver: simulate, sweep, cluster, equalize.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "apnlc/ap.hpp"
#include "apnlc/config.hpp"
#include "apnlc/dnle.hpp"
#include "apnlc/error.hpp"
#include "apnlc/fcm.hpp"
#include "apnlc/kmeans.hpp"
#include "apnlc/pipeline.hpp"
#include "apnlc/results.hpp"

namespace fs = std::filesystem;
using namespace apnlc;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
};

RunConfig load(const std::string& path, const Common& common) {
  RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
  if (common.seed) cfg.seed = *common.seed;
  cfg.validate();
  return cfg;
}

void print_report(const QualityReport& r) {
  std::printf("ber          %s\n", format_double(r.ber).c_str());
  std::printf("q_db         %s (%s)\n", format_double(r.q.q_db).c_str(), std::string(qflag_name(r.q.flag)).c_str());
  std::printf("evm_percent  %s\n", format_double(r.evm_percent).c_str());
  std::printf("bits         %zu (%zu errors)\n", r.bits_counted, r.bit_errors);
  if (r.ap_trimmed) std::printf("ap_trimmed   %zu subcarriers\n", r.ap_trimmed);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::trunc);
  require(out.good(), ErrorCode::Io, "cannot write '" + p.string() + "'");
  return out;
}

void write_cluster_outputs(const ClusterModel& m, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
  {
    auto out = open_out(dir / "centers.csv");
    out << "cluster,re,im\n";
    for (std::size_t j = 0; j < m.centers.size(); ++j)
      out << j << ',' << format_double(m.centers[j].real()) << ',' << format_double(m.centers[j].imag()) << '\n';
  }
  {
    auto out = open_out(dir / "assignments.csv");
    out << "point,cluster\n";
    for (std::size_t i = 0; i < m.assignment.size(); ++i) out << i << ',' << m.assignment[i] << '\n';
  }
  {
    auto out = open_out(dir / "summary.csv");
    out << "metric,value\n"
        << "method," << cluster_method_name(m.method) << '\n'
        << "clusters," << m.centers.size() << '\n'
        << "iterations," << m.n_iterations << '\n'
        << "converged," << (m.converged ? "true" : "false") << '\n'
        << "objective," << format_double(m.objective) << '\n';
  }
  if (!m.membership.empty()) {
    auto out = open_out(dir / "memberships.csv");
    out << "point";
    for (std::size_t j = 0; j < m.centers.size(); ++j) out << ",u" << j;
    out << '\n';
    for (std::size_t i = 0; i < m.assignment.size(); ++i) {
      out << i;
      for (std::size_t j = 0; j < m.centers.size(); ++j)
        out << ',' << format_double(m.membership[i * m.centers.size() + j]);
      out << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CO-OFDM link simulator with clustering and deterministic nonlinear equalizers"};
  app.require_subcommand(1);
  Common common;
  app.fallthrough();
  app.add_option("--seed", common.seed, "Override the base seed");

  std::string config_path;
  std::string out_dir;

  auto* simulate = app.add_subcommand("simulate", "Run one configuration and print its quality report");
  simulate->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out_dir, "Write a run directory");

  std::string powers_text, methods_text;
  auto* sweep = app.add_subcommand("sweep", "Launch power sweep over equalizers");
  sweep->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--powers", powers_text, "Comma list of launch powers in dBm")->required();
  sweep->add_option("--methods", methods_text, "Comma list of equalizers (NONE,AP,KMEANS,FCM,DBP,VOLTERRA)")
      ->required();
  sweep->add_option("--out", out_dir, "Run directory")->required();

  std::string input, method = "ap";
  std::optional<std::size_t> k;
  std::optional<double> preference, damping, fuzz;
  std::optional<int> max_iter;
  auto* cluster = app.add_subcommand("cluster", "Cluster a re,im point cloud");
  cluster->add_option("--input", input, "CSV with header re,im")->required()->check(CLI::ExistingFile);
  cluster->add_option("--method", method, "ap | kmeans | fcm")->check(CLI::IsMember({"ap", "kmeans", "fcm"}, CLI::ignore_case));
  cluster->add_option("--k", k, "Cluster count (AP: target count, free-running when omitted)");
  cluster->add_option("--preference", preference, "AP preference (median of similarities by default)");
  cluster->add_option("--damping", damping, "AP damping");
  cluster->add_option("--m", fuzz, "FCM fuzzifier");
  cluster->add_option("--max-iter", max_iter, "Iteration limit");
  cluster->add_option("--out", out_dir, "Output directory")->required();

  std::string output, eq_method = "dbp";
  std::optional<int> steps_per_span;
  auto* equalize = app.add_subcommand("equalize", "Waveform-domain equalization of a float64 binary capture");
  equalize->add_option("--input", input, "Interleaved little-endian float64 re,im")->required()->check(CLI::ExistingFile);
  equalize->add_option("--output", output, "Output file, same format")->required();
  equalize->add_option("--method", eq_method, "dbp | volterra | cdc | none")
      ->check(CLI::IsMember({"dbp", "volterra", "cdc", "none"}, CLI::ignore_case));
  equalize->add_option("--config", config_path, "Config giving link, sample rate and wavelength")->check(CLI::ExistingFile);
  equalize->add_option("--steps-per-span", steps_per_span, "DBP steps per span");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  std::string stage = "config";
  try {
    if (*simulate) {
      RunConfig cfg = load(config_path, common);
      stage = "simulate";
      if (out_dir.empty()) {
        print_report(run_once(cfg));
      } else {
        const double p = cfg.link.launch_power_dbm;
        const Equalizer e = cfg.equalizer;
        const SweepResult res = sweep_lop(cfg, std::span<const double>(&p, 1), std::span<const Equalizer>(&e, 1));
        stage = "write";
        write_results(res, out_dir);
        write_report_csv(res.rows.front().report, fs::path(out_dir) / "report.csv");
        print_report(res.rows.front().report);
      }
    } else if (*sweep) {
      RunConfig cfg = load(config_path, common);
      const auto powers = parse_number_list(powers_text);
      const auto methods = parse_equalizer_list(methods_text);
      stage = "sweep";
      const SweepResult res = sweep_lop(cfg, powers, methods);
      stage = "write";
      write_results(res, out_dir);
      for (const auto& row : res.rows)
        std::printf("%8s dBm  %-8s  q_db %-22s ber %s\n", format_double(row.launch_power_dbm).c_str(),
                    std::string(equalizer_name(row.equalizer)).c_str(), format_double(row.report.q.q_db).c_str(),
                    format_double(row.report.ber).c_str());
    } else if (*cluster) {
      stage = "read";
      const auto points = read_symbols_csv(input);
      stage = "cluster";
      const std::uint64_t seed = common.seed.value_or(1);
      const ClusterMethod cm = parse_cluster_method(method);
      ClusterModel model;
      if (cm == ClusterMethod::AP) {
        ApOptions o;
        o.preference = preference;
        if (damping) o.damping = *damping;
        if (max_iter) o.max_iter = *max_iter;
        model = k ? ap_cluster(points, *k, o) : ap_cluster(points, o);
      } else {
        require(k.has_value(), ErrorCode::InvalidArgument, "--k is required for " + method);
        if (cm == ClusterMethod::KMEANS) {
          KmeansOptions o;
          o.seed = seed;
          if (max_iter) o.max_iter = *max_iter;
          model = kmeans_cluster(points, *k, o);
        } else {
          FcmOptions o;
          o.seed = seed;
          if (fuzz) o.m = *fuzz;
          if (max_iter) o.max_iter = *max_iter;
          model = fcm_cluster(points, *k, o);
        }
      }
      stage = "write";
      write_cluster_outputs(model, out_dir);
      std::printf("%zu clusters, %d iterations, %s\n", model.centers.size(), model.n_iterations,
                  model.converged ? "converged" : "not converged");
    } else if (*equalize) {
      RunConfig cfg = load(config_path, common);
      stage = "read";
      ComplexSignal sig;
      sig.samples = read_symbols_binary(input);
      sig.sample_rate = cfg.ofdm.sample_rate;
      sig.center_frequency = cfg.center_frequency();
      stage = "equalize";
      const std::string m = CLI::detail::to_lower(eq_method);
      ComplexSignal out = sig;
      if (m == "dbp") {
        DbpConfig d;
        d.link = cfg.link;
        d.steps_per_span = steps_per_span.value_or(cfg.dbp_steps_per_span);
        out = dbp_equalize(sig, d);
      } else if (m == "volterra") {
        VolterraConfig v;
        v.link = cfg.link;
        out = volterra_equalize(sig, v);
      } else if (m == "cdc") {
        CdcParams p = cdc_for_link(cfg.link);
        p.block_size = cfg.cdc_block;
        p.passband = cfg.cdc_passband;
        out = cd_compensate(sig, p);
      }
      stage = "write";
      write_symbols_binary(output, out.samples);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "apnlc: %s failed [%s]: %s\n", stage.c_str(), to_string(e.code()), e.what());
    return e.code() == ErrorCode::Config ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "apnlc: %s failed: %s\n", stage.c_str(), e.what());
    return 1;
  }
  return 0;
}
