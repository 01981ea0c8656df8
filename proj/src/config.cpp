#include "apnlc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "apnlc/error.hpp"
#include "apnlc/results.hpp"

namespace apnlc {

namespace {

constexpr double kLightMPerS = 299792458.0;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view v) { return parse_double(std::string(v)); }

long long to_integer(std::string_view v) {
  const double d = to_double(v);
  require(std::isfinite(d) && d == std::floor(d), ErrorCode::Config,
          "expected an integer, got '" + std::string(v) + "'");
  return static_cast<long long>(d);
}

std::size_t to_count(std::string_view v) {
  const long long x = to_integer(v);
  require(x >= 0, ErrorCode::Config, "expected a non-negative integer, got '" + std::string(v) + "'");
  return static_cast<std::size_t>(x);
}

std::uint64_t to_seed(std::string_view v) {
  std::uint64_t x = 0;
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(first, last, x);
  require(ec == std::errc{} && ptr == last, ErrorCode::Config,
          "expected an unsigned 64-bit seed, got '" + std::string(v) + "'");
  return x;
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  fail(ErrorCode::Config, "expected a boolean, got '" + std::string(v) + "'");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string index_list_text(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

struct Key {
  const char* name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

// Order here is the canonical serialization order.
const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"ofdm.fft_size", [](RunConfig& c, std::string_view v) { c.ofdm.fft_size = to_count(v); },
       [](const RunConfig& c) { return std::to_string(c.ofdm.fft_size); }},
      {"ofdm.active_subcarriers",
       [](RunConfig& c, std::string_view v) { c.ofdm.active_subcarriers = to_count(v); },
       [](const RunConfig& c) { return std::to_string(c.ofdm.active_subcarriers); }},
      {"ofdm.cp_samples", [](RunConfig& c, std::string_view v) { c.ofdm.cp_samples = to_count(v); },
       [](const RunConfig& c) { return std::to_string(c.ofdm.cp_samples); }},
      {"ofdm.n_symbols", [](RunConfig& c, std::string_view v) { c.ofdm.n_symbols = to_count(v); },
       [](const RunConfig& c) { return std::to_string(c.ofdm.n_symbols); }},
      {"ofdm.n_training", [](RunConfig& c, std::string_view v) { c.ofdm.n_training = to_count(v); },
       [](const RunConfig& c) { return std::to_string(c.ofdm.n_training); }},
      {"ofdm.pilots",
       [](RunConfig& c, std::string_view v) {
         c.ofdm.pilot_indices.clear();
         if (v.empty() || v == "none") return;
         for (auto item : split(v, ',')) c.ofdm.pilot_indices.push_back(to_count(item));
       },
       [](const RunConfig& c) {
         return c.ofdm.pilot_indices.empty() ? std::string("none") : index_list_text(c.ofdm.pilot_indices);
       }},
      {"ofdm.sample_rate", [](RunConfig& c, std::string_view v) { c.ofdm.sample_rate = to_double(v); },
       [](const RunConfig& c) { return format_double(c.ofdm.sample_rate); }},

      {"link.bypass", [](RunConfig& c, std::string_view v) { c.link_bypass = to_bool(v); },
       [](const RunConfig& c) { return bool_text(c.link_bypass); }},
      {"link.n_spans",
       [](RunConfig& c, std::string_view v) { c.link.n_spans = static_cast<int>(to_integer(v)); },
       [](const RunConfig& c) { return std::to_string(c.link.n_spans); }},
      {"link.steps_per_span",
       [](RunConfig& c, std::string_view v) { c.link.steps_per_span = static_cast<int>(to_integer(v)); },
       [](const RunConfig& c) { return std::to_string(c.link.steps_per_span); }},
      {"link.launch_power_dbm",
       [](RunConfig& c, std::string_view v) { c.link.launch_power_dbm = to_double(v); },
       [](const RunConfig& c) { return format_double(c.link.launch_power_dbm); }},
      {"link.wavelength_nm", [](RunConfig& c, std::string_view v) { c.wavelength_nm = to_double(v); },
       [](const RunConfig& c) { return format_double(c.wavelength_nm); }},
      {"link.fiber.gamma", [](RunConfig& c, std::string_view v) { c.link.fiber.gamma = to_double(v); },
       [](const RunConfig& c) { return format_double(c.link.fiber.gamma); }},
      {"link.fiber.dispersion",
       [](RunConfig& c, std::string_view v) { c.link.fiber.dispersion = to_double(v); },
       [](const RunConfig& c) { return format_double(c.link.fiber.dispersion); }},
      {"link.fiber.slope", [](RunConfig& c, std::string_view v) { c.link.fiber.slope = to_double(v); },
       [](const RunConfig& c) { return format_double(c.link.fiber.slope); }},
      {"link.fiber.alpha_db",
       [](RunConfig& c, std::string_view v) { c.link.fiber.alpha_db = to_double(v); },
       [](const RunConfig& c) { return format_double(c.link.fiber.alpha_db); }},
      {"link.fiber.length_km",
       [](RunConfig& c, std::string_view v) { c.link.fiber.length_km = to_double(v); },
       [](const RunConfig& c) { return format_double(c.link.fiber.length_km); }},
      {"link.amp.gain_db",
       [](RunConfig& c, std::string_view v) {
         if (v == "auto")
           c.link.gain_db.reset();
         else
           c.link.gain_db = to_double(v);
       },
       [](const RunConfig& c) { return c.link.gain_db ? format_double(*c.link.gain_db) : std::string("auto"); }},
      {"link.amp.noise_figure_db",
       [](RunConfig& c, std::string_view v) { c.link.amp.noise_figure_db = to_double(v); },
       [](const RunConfig& c) { return format_double(c.link.amp.noise_figure_db); }},
      {"link.amp.enforce_quantum_limit",
       [](RunConfig& c, std::string_view v) { c.link.amp.enforce_quantum_limit = to_bool(v); },
       [](const RunConfig& c) { return bool_text(c.link.amp.enforce_quantum_limit); }},
      {"link.ase.enabled", [](RunConfig& c, std::string_view v) { c.link.ase_enabled = to_bool(v); },
       [](const RunConfig& c) { return bool_text(c.link.ase_enabled); }},
      {"link.converters.enabled",
       [](RunConfig& c, std::string_view v) { c.converters_enabled = to_bool(v); },
       [](const RunConfig& c) { return bool_text(c.converters_enabled); }},
      {"link.converters.resolution_bits",
       [](RunConfig& c, std::string_view v) {
         c.link.converters.resolution_bits = static_cast<int>(to_integer(v));
       },
       [](const RunConfig& c) { return std::to_string(c.link.converters.resolution_bits); }},
      {"link.converters.clipping_ratio_db",
       [](RunConfig& c, std::string_view v) { c.link.converters.clipping_ratio_db = to_double(v); },
       [](const RunConfig& c) { return format_double(c.link.converters.clipping_ratio_db); }},

      {"run.constellation", [](RunConfig& c, std::string_view v) { c.format = parse_format(v); },
       [](const RunConfig& c) { return std::string(format_name(c.format)); }},
      {"run.equalizer", [](RunConfig& c, std::string_view v) { c.equalizer = parse_equalizer(v); },
       [](const RunConfig& c) { return std::string(equalizer_name(c.equalizer)); }},
      {"run.n_frames",
       [](RunConfig& c, std::string_view v) { c.n_frames = static_cast<int>(to_integer(v)); },
       [](const RunConfig& c) { return std::to_string(c.n_frames); }},
      {"run.seed", [](RunConfig& c, std::string_view v) { c.seed = to_seed(v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"run.common_phase", [](RunConfig& c, std::string_view v) { c.common_phase = to_bool(v); },
       [](const RunConfig& c) { return bool_text(c.common_phase); }},
      {"run.dump_symbols", [](RunConfig& c, std::string_view v) { c.dump_symbols = to_bool(v); },
       [](const RunConfig& c) { return bool_text(c.dump_symbols); }},

      {"cluster.min_support", [](RunConfig& c, std::string_view v) { c.nle.min_support_per_point = to_count(v); },
       [](const RunConfig& c) { return std::to_string(c.nle.min_support_per_point); }},
      {"cluster.ap.damping", [](RunConfig& c, std::string_view v) { c.nle.ap.damping = to_double(v); },
       [](const RunConfig& c) { return format_double(c.nle.ap.damping); }},
      {"cluster.ap.max_iter",
       [](RunConfig& c, std::string_view v) { c.nle.ap.max_iter = static_cast<int>(to_integer(v)); },
       [](const RunConfig& c) { return std::to_string(c.nle.ap.max_iter); }},
      {"cluster.ap.window",
       [](RunConfig& c, std::string_view v) { c.nle.ap.window = static_cast<int>(to_integer(v)); },
       [](const RunConfig& c) { return std::to_string(c.nle.ap.window); }},
      {"cluster.ap.preference",
       [](RunConfig& c, std::string_view v) {
         if (v == "median")
           c.nle.ap.preference.reset();
         else
           c.nle.ap.preference = to_double(v);
       },
       [](const RunConfig& c) {
         return c.nle.ap.preference ? format_double(*c.nle.ap.preference) : std::string("median");
       }},
      {"cluster.ap.max_points", [](RunConfig& c, std::string_view v) { c.nle.ap.max_points = to_count(v); },
       [](const RunConfig& c) { return std::to_string(c.nle.ap.max_points); }},
      {"cluster.ap.bisection_steps",
       [](RunConfig& c, std::string_view v) { c.nle.ap.bisection_steps = static_cast<int>(to_integer(v)); },
       [](const RunConfig& c) { return std::to_string(c.nle.ap.bisection_steps); }},
      {"cluster.ap.damping_escalations",
       [](RunConfig& c, std::string_view v) { c.nle.ap.damping_escalations = static_cast<int>(to_integer(v)); },
       [](const RunConfig& c) { return std::to_string(c.nle.ap.damping_escalations); }},
      {"cluster.ap.escalate_after",
       [](RunConfig& c, std::string_view v) { c.nle.ap.escalate_after = static_cast<int>(to_integer(v)); },
       [](const RunConfig& c) { return std::to_string(c.nle.ap.escalate_after); }},
      {"cluster.ap.tie_noise", [](RunConfig& c, std::string_view v) { c.nle.ap.tie_noise = to_double(v); },
       [](const RunConfig& c) { return format_double(c.nle.ap.tie_noise); }},
      {"cluster.kmeans.max_iter",
       [](RunConfig& c, std::string_view v) { c.nle.kmeans.max_iter = static_cast<int>(to_integer(v)); },
       [](const RunConfig& c) { return std::to_string(c.nle.kmeans.max_iter); }},
      {"cluster.kmeans.n_init",
       [](RunConfig& c, std::string_view v) { c.nle.kmeans.n_init = static_cast<int>(to_integer(v)); },
       [](const RunConfig& c) { return std::to_string(c.nle.kmeans.n_init); }},
      {"cluster.fcm.m", [](RunConfig& c, std::string_view v) { c.nle.fcm.m = to_double(v); },
       [](const RunConfig& c) { return format_double(c.nle.fcm.m); }},
      {"cluster.fcm.max_iter",
       [](RunConfig& c, std::string_view v) { c.nle.fcm.max_iter = static_cast<int>(to_integer(v)); },
       [](const RunConfig& c) { return std::to_string(c.nle.fcm.max_iter); }},
      {"cluster.fcm.tol", [](RunConfig& c, std::string_view v) { c.nle.fcm.tol = to_double(v); },
       [](const RunConfig& c) { return format_double(c.nle.fcm.tol); }},

      {"dbp.steps_per_span",
       [](RunConfig& c, std::string_view v) { c.dbp_steps_per_span = static_cast<int>(to_integer(v)); },
       [](const RunConfig& c) { return std::to_string(c.dbp_steps_per_span); }},
      {"cdc.block", [](RunConfig& c, std::string_view v) { c.cdc_block = to_count(v); },
       [](const RunConfig& c) { return std::to_string(c.cdc_block); }},
      {"cdc.passband", [](RunConfig& c, std::string_view v) { c.cdc_passband = to_double(v); },
       [](const RunConfig& c) { return format_double(c.cdc_passband); }},
  };
  return table;
}

const Key* find_key(std::string_view name) {
  for (const auto& k : keys())
    if (name == k.name) return &k;
  return nullptr;
}

}  // namespace

Equalizer parse_equalizer(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) { return std::toupper(ch); });
  for (Equalizer e : {Equalizer::NONE, Equalizer::AP, Equalizer::KMEANS, Equalizer::FCM, Equalizer::DBP,
                      Equalizer::VOLTERRA})
    if (up == equalizer_name(e)) return e;
  fail(ErrorCode::Config, "unknown equalizer '" + std::string(name) + "'");
}

std::string_view equalizer_name(Equalizer e) noexcept {
  switch (e) {
    case Equalizer::NONE: return "NONE";
    case Equalizer::AP: return "AP";
    case Equalizer::KMEANS: return "KMEANS";
    case Equalizer::FCM: return "FCM";
    case Equalizer::DBP: return "DBP";
    case Equalizer::VOLTERRA: return "VOLTERRA";
  }
  return "NONE";
}

bool is_clustering(Equalizer e) noexcept {
  return e == Equalizer::AP || e == Equalizer::KMEANS || e == Equalizer::FCM;
}

double RunConfig::center_frequency() const noexcept { return kLightMPerS / (wavelength_nm * 1e-9); }

void RunConfig::validate() const {
  try {
    ofdm.validate();
    link.validate();
    if (converters_enabled) link.converters.validate();
  } catch (const Error& e) {
    fail(ErrorCode::Config, e.what());
  }
  require(wavelength_nm > 0.0, ErrorCode::Config, "link.wavelength_nm must be positive");
  require(n_frames >= 1, ErrorCode::Config, "run.n_frames must be >= 1");
  require(dbp_steps_per_span >= 1, ErrorCode::Config, "dbp.steps_per_span must be >= 1");
  require(cdc_passband > 0.0 && cdc_passband < 0.5, ErrorCode::Config, "cdc.passband must be in (0, 0.5)");
  require(nle.ap.damping >= 0.0 && nle.ap.damping < 1.0, ErrorCode::Config,
          "cluster.ap.damping must be in [0, 1)");
  require(nle.ap.max_iter >= 1 && nle.ap.window >= 1, ErrorCode::Config, "cluster.ap iteration limits must be >= 1");
  require(nle.ap.escalate_after >= 1, ErrorCode::Config, "cluster.ap.escalate_after must be >= 1");
  require(nle.ap.damping_escalations >= 0 && nle.ap.tie_noise >= 0.0, ErrorCode::Config,
          "cluster.ap.damping_escalations and cluster.ap.tie_noise must be >= 0");
  require(nle.ap.max_points >= 2, ErrorCode::Config, "cluster.ap.max_points must be >= 2");
  require(nle.kmeans.max_iter >= 1 && nle.kmeans.n_init >= 1, ErrorCode::Config,
          "cluster.kmeans limits must be >= 1");
  require(nle.fcm.m > 1.0, ErrorCode::Config, "cluster.fcm.m must exceed 1");
  require(nle.fcm.tol > 0.0 && nle.fcm.max_iter >= 1, ErrorCode::Config, "cluster.fcm limits invalid");
  require(!ofdm.pilot_indices.empty() || !common_phase, ErrorCode::Config,
          "run.common_phase needs at least one pilot");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? end : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    require(eq != std::string_view::npos, ErrorCode::Config, where + "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    require(!key.starts_with("link.wdm"), ErrorCode::Config,
            where + "multi-channel (link.wdm.*) links are not implemented");
    const Key* k = find_key(key);
    require(k != nullptr, ErrorCode::Config, where + "unknown key '" + std::string(key) + "'");
    try {
      k->set(cfg, value);
    } catch (const Error& e) {
      fail(ErrorCode::Config, where + std::string(key) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::Io, "cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& k : keys()) {
    out += k.name;
    out += " = ";
    out += k.get(cfg);
    out += '\n';
  }
  return out;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  require(!trim(text).empty(), ErrorCode::EmptyRequest, "empty number list");
  for (auto item : split(text, ',')) {
    require(!item.empty(), ErrorCode::Config, "empty entry in number list '" + std::string(text) + "'");
    out.push_back(to_double(item));
  }
  return out;
}

std::vector<Equalizer> parse_equalizer_list(std::string_view text) {
  std::vector<Equalizer> out;
  require(!trim(text).empty(), ErrorCode::EmptyRequest, "empty method list");
  for (auto item : split(text, ',')) {
    const Equalizer e = parse_equalizer(item);
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  }
  return out;
}

}  // namespace apnlc
