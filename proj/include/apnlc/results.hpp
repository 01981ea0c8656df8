#pragma once

#include <filesystem>
#include <string>

#include "apnlc/pipeline.hpp"

namespace apnlc {

inline constexpr const char* kSweepHeader =
    "launch_power_dbm,equalizer,ber,q_db,q_flag,evm_percent,bits_counted,bit_errors,ap_trimmed,seed";
inline constexpr const char* kTimingHeader = "launch_power_dbm,equalizer,runtime_seconds";
inline constexpr const char* kSubcarrierHeader = "subcarrier,q_db,flag";
inline constexpr const char* kSeedHeader = "launch_power_dbm,frame,data_seed,noise_seed";

/// Run directory layout:
///   config.cfg             canonical config snapshot
///   seeds.csv              seed manifest
///   sweep.csv              one row per (power, equalizer); no timing
///   timing.csv             wall-clock seconds per row
///   subcarriers/<p>_<eq>.csv   per-subcarrier Q
///   symbols/<p>_<eq>.csv       symbol cloud (when dumping)
void write_results(const SweepResult& res, const std::filesystem::path& dir);
SweepResult read_results(const std::filesystem::path& dir);

/// "metric,value" rows.
void write_report_csv(const QualityReport& r, const std::filesystem::path& path);
void write_subcarrier_csv(const QualityReport& r, const std::filesystem::path& path);

std::string format_double(double v);
double parse_double(const std::string& s);

}  // namespace apnlc
