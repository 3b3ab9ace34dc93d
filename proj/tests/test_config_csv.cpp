#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "hpai/config.hpp"
#include "hpai/csv.hpp"
#include "test_support.hpp"

using namespace hpai;

namespace {

std::size_t error_line(std::string_view text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  FAIL("expected ConfigError");
  return 0;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("empty config gives the defaults") {
  const auto cfg = parse_config("");
  for (std::size_t i = 0; i < kParamCount; ++i) {
    const auto q = static_cast<Param>(i);
    CHECK(cfg.params[q] == ModelParams{}[q]);
  }
  CHECK(cfg.init == HerdState{2999, 1, 0, 0, 0, 0});
  CHECK(cfg.sim.t_end == 500.0);
  CHECK(cfg.sim.dt == 0.01);
  CHECK(cfg.noise.sig_ia == 0.05);
  CHECK(cfg.n_paths == 100);
  CHECK(cfg.seed == 42);
  CHECK(parse_config("  # only a comment\n\n").seed == 42);
}

TEST_CASE("config overlay") {
  const auto cfg = parse_config("beta_a = 0.46665  # endemic\nseed=7\ns0 = 2000\n");
  CHECK(cfg.params->beta_a == 0.46665);
  CHECK(cfg.params->beta_s == 0.005);
  CHECK(cfg.seed == 7);
  CHECK(cfg.init.s == 2000.0);
  CHECK(cfg.init.e == 1.0);
  // Omitted S0 follows the parsed recruitment and mortality.
  CHECK(parse_config("lambda = 60\n").init.s == 5999.0);
}

TEST_CASE("config errors carry line numbers") {
  CHECK(error_line("nu = 1.5\n") == 1);
  CHECK(error_line("mu = 0.01\n\nbogus = 3\n") == 3);
  CHECK(error_line("mu = 0.01\nmu = 0.02\n") == 2);
  CHECK(error_line("seed = 1\ndt = abc\n") == 2);
  CHECK(error_line("dt\n") == 1);
  CHECK(error_line("mu = -1\n") == 1);
  CHECK(error_line("sig_s = nan\n") == 1);
  CHECK(error_line("n_paths = 0\n") == 1);
  CHECK(error_line("n_paths = 2.5\n") == 1);
  CHECK(error_line("e0 = -3\n") == 1);
  try {
    (void)parse_config("mu = 0.01\nmu = 0.02\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
}

TEST_CASE("config round trip") {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 50; ++i) {
    RunConfig cfg;
    cfg.params = hpai::testing::random_params(gen);
    cfg.noise = NoiseIntensities::uniform(std::uniform_real_distribution<double>(0, 1)(gen));
    cfg.init = hpai::testing::random_state(gen);
    cfg.seed = gen();
    cfg.n_paths = 1 + gen() % 1000;
    const auto back = parse_config(format_config(cfg));
    for (std::size_t k = 0; k < kParamCount; ++k) {
      CHECK(same_bits(back.params[static_cast<Param>(k)], cfg.params[static_cast<Param>(k)]));
    }
    CHECK(back.init == cfg.init);
    CHECK(back.noise.sig_s == cfg.noise.sig_s);
    CHECK(back.seed == cfg.seed);
    CHECK(back.n_paths == cfg.n_paths);
  }
}

TEST_CASE("ranges parsing") {
  const auto r = parse_ranges("beta_a = 0.1, 0.9\n# c\ngamma=0.05,0.2\n");
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].param == Param::beta_a);
  CHECK(r.entries[0].low == 0.1);
  CHECK(r.entries[1].high == 0.2);
  CHECK_THROWS_AS(parse_ranges("beta_a = 0.9, 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_ranges("beta_a = 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_ranges("zzz = 0.1, 0.2\n"), ConfigError);
  CHECK_THROWS_AS(parse_ranges(""), ConfigError);
}

TEST_CASE("double formatting round-trips") {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 20000; ++i) {
    double x;
    const auto b = bits(gen);
    std::memcpy(&x, &b, sizeof x);
    if (!std::isfinite(x)) continue;
    const auto back = parse_double(format_double(x));
    REQUIRE(back.has_value());
    CHECK(same_bits(*back, x));
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(3000.0) == "3000");
  CHECK_FALSE(parse_double("1.0x").has_value());
  CHECK_FALSE(parse_double("").has_value());
}

TEST_CASE("trajectory CSV round-trips bit-exactly") {
  const auto p = hpai::testing::endemic_params();
  SimConfig cfg;
  cfg.t_end = 20.0;
  cfg.record_stride = 7;
  const auto traj = integrate_sde(p, NoiseIntensities::uniform(0.2), default_initial_state(p), cfg, {3, 0});
  std::stringstream ss;
  write_trajectory_csv(ss, traj);
  CHECK(ss.str().rfind(std::string(kTrajectoryHeader) + "\n", 0) == 0);
  const auto back = read_trajectory_csv(ss);
  REQUIRE(back.size() == traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    CHECK(same_bits(back.times[i], traj.times[i]));
    for (std::size_t c = 0; c < kCompartments; ++c) CHECK(same_bits(back.states[i][c], traj.states[i][c]));
  }
  std::istringstream bad("t,S\n1,2\n");
  CHECK_THROWS_AS(read_trajectory_csv(bad), ValidationError);
}

TEST_CASE("ensemble and sensitivity CSVs") {
  const auto p = hpai::testing::endemic_params();
  SimConfig cfg;
  cfg.t_end = 10.0;
  cfg.record_stride = 100;
  const auto summary = run_ensemble(p, NoiseIntensities{}, default_initial_state(p), cfg, 5, 1);
  std::stringstream ss;
  write_ensemble_csv(ss, summary);
  const auto rows = read_ensemble_csv(ss);
  REQUIRE(rows.size() == summary.times.size() * kCompartments);
  CHECK(rows[1].compartment == "E");
  CHECK(same_bits(rows[1].mean, summary.stats[1].mean[0]));
  CHECK(same_bits(rows.back().q975, summary.stats[5].q975.back()));

  const auto rep = sensitivity_of_r0(ModelParams{}, ParamRanges::around(ModelParams{}), 50, 2);
  std::stringstream sr;
  write_sensitivity_csv(sr, rep);
  const auto entries = read_sensitivity_csv(sr);
  REQUIRE(entries.size() == rep.entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK(entries[i].name == rep.entries[i].name);
    CHECK(same_bits(entries[i].prcc, rep.entries[i].prcc));
    CHECK(entries[i].significant == rep.entries[i].significant);
  }
}
