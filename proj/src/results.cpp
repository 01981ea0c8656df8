#include "apnlc/results.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "apnlc/error.hpp"

namespace apnlc {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

struct CsvTable {
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const fs::path& path, const std::string& header) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == header, ErrorCode::Io, "'" + path.string() + "': unexpected header '" + line + "'");
  const std::size_t cols = split_csv_line(header).size();
  CsvTable t;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto row = split_csv_line(line);
    require(row.size() == cols, ErrorCode::Io, "'" + path.string() + "': malformed row '" + line + "'");
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::Io, "cannot write '" + path.string() + "'");
  return out;
}

void check_written(std::ofstream& out, const fs::path& path) {
  out.flush();
  require(out.good(), ErrorCode::Io, "write failed for '" + path.string() + "'");
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc{} && ptr == s.data() + s.size(), ErrorCode::Io, "bad integer '" + s + "'");
  return v;
}

std::string cell_stem(double power, Equalizer eq) {
  return format_double(power) + "_" + std::string(equalizer_name(eq));
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  require(ec == std::errc{}, ErrorCode::NumericalFailure, "format_double failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  require(ec == std::errc{} && ptr == s.data() + s.size() && !s.empty(), ErrorCode::InvalidArgument,
          "not a number: '" + s + "'");
  return v;
}

void write_report_csv(const QualityReport& r, const fs::path& path) {
  auto out = open_out(path);
  out << "metric,value\n"
      << "ber," << format_double(r.ber) << '\n'
      << "q_db," << format_double(r.q.q_db) << '\n'
      << "q_flag," << qflag_name(r.q.flag) << '\n'
      << "evm_percent," << format_double(r.evm_percent) << '\n'
      << "bits_counted," << r.bits_counted << '\n'
      << "bit_errors," << r.bit_errors << '\n'
      << "ap_trimmed," << r.ap_trimmed << '\n';
  check_written(out, path);
}

void write_subcarrier_csv(const QualityReport& r, const fs::path& path) {
  require(r.subcarrier_index.size() == r.per_subcarrier_q.size(), ErrorCode::DimensionMismatch,
          "per-subcarrier table and index differ in length");
  auto out = open_out(path);
  out << kSubcarrierHeader << '\n';
  for (std::size_t i = 0; i < r.per_subcarrier_q.size(); ++i)
    out << r.subcarrier_index[i] << ',' << format_double(r.per_subcarrier_q[i].q_db) << ','
        << qflag_name(r.per_subcarrier_q[i].flag) << '\n';
  check_written(out, path);
}

void write_results(const SweepResult& res, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / "subcarriers", ec);
  require(!ec, ErrorCode::Io, "cannot create '" + (dir / "subcarriers").string() + "': " + ec.message());
  const bool dump = std::any_of(res.rows.begin(), res.rows.end(), [](const SweepRow& r) { return !r.symbols.empty(); });
  if (dump) {
    fs::create_directories(dir / "symbols", ec);
    require(!ec, ErrorCode::Io, "cannot create '" + (dir / "symbols").string() + "': " + ec.message());
  }

  {
    auto out = open_out(dir / "config.cfg");
    out << serialize_config(res.config);
    check_written(out, dir / "config.cfg");
  }
  {
    auto out = open_out(dir / "seeds.csv");
    out << kSeedHeader << '\n';
    for (const auto& s : res.seeds)
      out << format_double(s.launch_power_dbm) << ',' << s.frame << ',' << s.data_seed << ',' << s.noise_seed << '\n';
    check_written(out, dir / "seeds.csv");
  }
  {
    auto sweep = open_out(dir / "sweep.csv");
    auto timing = open_out(dir / "timing.csv");
    sweep << kSweepHeader << '\n';
    timing << kTimingHeader << '\n';
    for (const auto& row : res.rows) {
      const QualityReport& r = row.report;
      const std::string p = format_double(row.launch_power_dbm);
      const std::string_view eq = equalizer_name(row.equalizer);
      sweep << p << ',' << eq << ',' << format_double(r.ber) << ',' << format_double(r.q.q_db) << ','
            << qflag_name(r.q.flag) << ',' << format_double(r.evm_percent) << ',' << r.bits_counted << ','
            << r.bit_errors << ',' << r.ap_trimmed << ',' << row.seed << '\n';
      timing << p << ',' << eq << ',' << format_double(row.runtime_seconds) << '\n';
      write_subcarrier_csv(r, dir / "subcarriers" / (cell_stem(row.launch_power_dbm, row.equalizer) + ".csv"));
      if (!row.symbols.empty())
        write_symbols_csv(dir / "symbols" / (cell_stem(row.launch_power_dbm, row.equalizer) + ".csv"), row.symbols);
    }
    check_written(sweep, dir / "sweep.csv");
    check_written(timing, dir / "timing.csv");
  }
}

SweepResult read_results(const fs::path& dir) {
  SweepResult res;
  res.config = load_config(dir / "config.cfg");

  for (const auto& r : read_csv(dir / "seeds.csv", kSeedHeader).rows)
    res.seeds.push_back({parse_double(r[0]), static_cast<std::size_t>(parse_u64(r[1])), parse_u64(r[2]),
                         parse_u64(r[3])});

  const auto timing = read_csv(dir / "timing.csv", kTimingHeader).rows;
  const auto sweep = read_csv(dir / "sweep.csv", kSweepHeader).rows;
  require(timing.size() == sweep.size(), ErrorCode::Io, "sweep.csv and timing.csv row counts differ");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& c = sweep[i];
    SweepRow row;
    row.launch_power_dbm = parse_double(c[0]);
    row.equalizer = parse_equalizer(c[1]);
    require(timing[i][0] == c[0] && timing[i][1] == c[1], ErrorCode::Io, "timing.csv rows out of order");
    row.runtime_seconds = parse_double(timing[i][2]);
    QualityReport& r = row.report;
    r.ber = parse_double(c[2]);
    r.q = {parse_double(c[3]), parse_qflag(c[4])};
    r.evm_percent = parse_double(c[5]);
    r.bits_counted = parse_u64(c[6]);
    r.bit_errors = parse_u64(c[7]);
    r.ap_trimmed = parse_u64(c[8]);
    row.seed = parse_u64(c[9]);
    const std::string stem = cell_stem(row.launch_power_dbm, row.equalizer) + ".csv";
    for (const auto& s : read_csv(dir / "subcarriers" / stem, kSubcarrierHeader).rows) {
      r.subcarrier_index.push_back(parse_u64(s[0]));
      r.per_subcarrier_q.push_back({parse_double(s[1]), parse_qflag(s[2])});
    }
    if (fs::exists(dir / "symbols" / stem)) row.symbols = read_symbols_csv(dir / "symbols" / stem);
    res.rows.push_back(std::move(row));
  }
  return res;
}

}  // namespace apnlc
