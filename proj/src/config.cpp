#include "hpai/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "hpai/csv.hpp"

namespace hpai {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct KeyValue {
  std::size_t line;
  std::string key;
  std::string_view value;
};

// Splits text into key/value lines, rejecting malformed and duplicate keys.
std::vector<KeyValue> tokenize(std::string_view text) {
  std::vector<KeyValue> out;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key");
    if (value.empty()) throw ConfigError(line_no, "missing value for '" + std::string(key) + "'");
    if (auto it = seen.find(key); it != seen.end()) {
      throw ConfigError(line_no, "duplicate key '" + std::string(key) + "' (first set on line " +
                                     std::to_string(it->second) + ")");
    }
    seen.emplace(std::string(key), line_no);
    out.push_back({line_no, std::string(key), value});
  }
  return out;
}

double number(const KeyValue& kv) {
  const auto v = parse_double(kv.value);
  if (!v || !std::isfinite(*v)) {
    throw ConfigError(kv.line, "unparsable number '" + std::string(kv.value) + "' for " + kv.key);
  }
  return *v;
}

std::uint64_t integer(const KeyValue& kv) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), v);
  if (res.ec != std::errc{} || res.ptr != kv.value.data() + kv.value.size()) {
    throw ConfigError(kv.line, "unparsable integer '" + std::string(kv.value) + "' for " + kv.key);
  }
  return v;
}

void check(bool ok, const KeyValue& kv, const std::string& rule) {
  if (!ok) throw ConfigError(kv.line, kv.key + " = " + std::string(kv.value) + ": " + rule);
}

void check_param(Param p, double x, const KeyValue& kv) {
  check(x >= 0.0, kv, "must be nonnegative");
  if (p == Param::nu) check(x <= 1.0, kv, "must lie in [0, 1]");
  if (p == Param::mu || p == Param::k || p == Param::epsilon) check(x > 0.0, kv, "must be positive");
}

constexpr std::array<std::string_view, 5> kNoiseKeys{"sig_s", "sig_e", "sig_is", "sig_ia", "sig_b"};
constexpr std::array<std::string_view, kCompartments> kInitKeys{"s0", "e0", "is0", "ia0", "r0", "b0"};

double& noise_field(NoiseIntensities& n, std::size_t i) {
  std::array<double*, 5> f{&n.sig_s, &n.sig_e, &n.sig_is, &n.sig_ia, &n.sig_b};
  return *f[i];
}

template <std::size_t N>
std::optional<std::size_t> find_key(const std::array<std::string_view, N>& keys, std::string_view k) {
  for (std::size_t i = 0; i < N; ++i) {
    if (keys[i] == k) return i;
  }
  return std::nullopt;
}

}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& what)
    : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  ParamValues values;
  std::array<std::optional<double>, kCompartments> init;
  std::size_t t_end_line = 0;
  std::size_t dt_line = 0;

  for (const auto& kv : tokenize(text)) {
    if (auto p = param_from_name(kv.key)) {
      const double x = number(kv);
      check_param(*p, x, kv);
      values[*p] = x;
    } else if (auto i = find_key(kNoiseKeys, kv.key)) {
      const double x = number(kv);
      check(x >= 0.0, kv, "must be nonnegative");
      noise_field(cfg.noise, *i) = x;
    } else if (auto c = find_key(kInitKeys, kv.key)) {
      const double x = number(kv);
      check(x >= 0.0, kv, "must be nonnegative");
      init[*c] = x;
    } else if (kv.key == "t_end") {
      cfg.sim.t_end = number(kv);
      check(cfg.sim.t_end > 0.0, kv, "must be positive");
      t_end_line = kv.line;
    } else if (kv.key == "dt") {
      cfg.sim.dt = number(kv);
      check(cfg.sim.dt > 0.0, kv, "must be positive");
      dt_line = kv.line;
    } else if (kv.key == "n_paths") {
      cfg.n_paths = integer(kv);
      check(cfg.n_paths >= 1, kv, "must be at least 1");
    } else if (kv.key == "seed") {
      cfg.seed = integer(kv);
    } else {
      throw ConfigError(kv.line, "unknown key '" + kv.key + "'");
    }
  }

  try {
    cfg.sim.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::max(t_end_line, dt_line), e.what());
  }
  cfg.params = ModelParams(values);
  const HerdState fallback = default_initial_state(cfg.params);
  for (std::size_t c = 0; c < kCompartments; ++c) cfg.init[c] = init[c].value_or(fallback[c]);
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

std::string format_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# model parameters\n";
  for (std::size_t i = 0; i < kParamCount; ++i) {
    const auto p = static_cast<Param>(i);
    os << param_name(p) << " = " << format_double(cfg.params[p]) << '\n';
  }
  os << "\n# noise intensities\n";
  NoiseIntensities n = cfg.noise;
  for (std::size_t i = 0; i < kNoiseKeys.size(); ++i) {
    os << kNoiseKeys[i] << " = " << format_double(noise_field(n, i)) << '\n';
  }
  os << "\n# initial state\n";
  for (std::size_t c = 0; c < kCompartments; ++c) {
    os << kInitKeys[c] << " = " << format_double(cfg.init[c]) << '\n';
  }
  os << "\n# simulation\n"
     << "t_end = " << format_double(cfg.sim.t_end) << '\n'
     << "dt = " << format_double(cfg.sim.dt) << '\n'
     << "n_paths = " << cfg.n_paths << '\n'
     << "seed = " << cfg.seed << '\n';
  return os.str();
}

ParamRanges parse_ranges(std::string_view text) {
  ParamRanges ranges;
  for (const auto& kv : tokenize(text)) {
    const auto p = param_from_name(kv.key);
    if (!p) throw ConfigError(kv.line, "unknown parameter '" + kv.key + "'");
    const auto comma = kv.value.find(',');
    if (comma == std::string_view::npos) throw ConfigError(kv.line, "expected 'low, high'");
    const auto lo = parse_double(trim(kv.value.substr(0, comma)));
    const auto hi = parse_double(trim(kv.value.substr(comma + 1)));
    if (!lo || !hi) throw ConfigError(kv.line, "unparsable bounds '" + std::string(kv.value) + "'");
    ranges.entries.push_back({*p, *lo, *hi});
    try {
      ParamRanges single{{ranges.entries.back()}};
      single.validate();
    } catch (const ValidationError& e) {
      throw ConfigError(kv.line, e.what());
    }
  }
  if (ranges.entries.empty()) throw ConfigError(0, "ranges file defines no parameters");
  return ranges;
}

ParamRanges load_ranges(const std::string& path) { return parse_ranges(read_text_file(path)); }

}  // namespace hpai
