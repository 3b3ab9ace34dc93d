#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "hpai/error.hpp"
#include "hpai/integrate.hpp"
#include "hpai/model.hpp"
#include "hpai/sensitivity.hpp"

namespace hpai {

inline constexpr std::size_t kDefaultPaths = 100;
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Everything one experiment needs. Default-constructed values are the
/// baseline herd with one exposed animal.
struct RunConfig {
  ModelParams params;
  NoiseIntensities noise;
  HerdState init = default_initial_state(ModelParams{});
  SimConfig sim;
  std::size_t n_paths = kDefaultPaths;
  std::uint64_t seed = kDefaultSeed;
};

// Parse failure; line() is 1-based, 0 when the problem spans the whole input.
class ConfigError : public ValidationError {
 public:
  ConfigError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Line-oriented `key = value` text; `#` starts a comment. Keys: the
/// parameter names (lambda, mu, ..., epsilon), sig_s, sig_e, sig_is, sig_ia,
/// sig_b, s0, e0, is0, ia0, r0, b0, t_end, dt, n_paths, seed. Omitted keys
/// keep their defaults; initial-state components not given fall back to the
/// default initial state of the parsed parameters.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Writes every key; parse_config(format_config(c)) reproduces c exactly.
std::string format_config(const RunConfig& cfg);

/// `key = low, high` lines over parameter names.
ParamRanges parse_ranges(std::string_view text);
ParamRanges load_ranges(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace hpai
