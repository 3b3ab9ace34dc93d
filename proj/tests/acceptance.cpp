// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hpai/config.hpp"
#include "hpai/csv.hpp"
#include "hpai/ensemble.hpp"
#include "hpai/equilibrium.hpp"
#include "hpai/integrate.hpp"
#include "hpai/model.hpp"
#include "hpai/sensitivity.hpp"
#include "test_support.hpp"

using namespace hpai;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_budget = budget_s <= 0.0 || secs < budget_s;
  const bool pass = o.pass && in_budget;
  failures += !pass;
  std::ostringstream line;
  line << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << title << ": " << o.detail << " (" << secs << " s";
  if (budget_s > 0.0) line << ", budget " << budget_s << " s" << (in_budget ? "" : ", OVER BUDGET");
  line << ")";
  std::cout << line.str() << std::endl;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

Outcome r0_oracles() {
  std::mt19937_64 gen(20240501);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = hpai::testing::random_params(gen);
    worst = std::max(worst, hpai::testing::rel_diff(r0_closed_form(p), r0_spectral(p)));
  }
  return {worst < 1e-10, "max relative difference " + fmt(worst) + " over 1000 draws"};
}

Outcome r0_values() {
  const double endemic = r0_closed_form(ModelParams{}.with(Param::beta_a, 0.46665));
  const double endemic_spectral = r0_spectral(ModelParams{}.with(Param::beta_a, 0.46665));
  const double base = r0_closed_form(ModelParams{});
  const double base_spectral = r0_spectral(ModelParams{});
  const bool ok = std::abs(endemic - 3.1945) <= 1e-3 && std::abs(base - 0.047240) <= 1e-6 &&
                  std::abs(base_spectral - 0.047240) <= 1e-6 && std::abs(endemic_spectral - 3.1945) <= 1e-3;
  return {ok, "R0(beta_a=0.46665)=" + fmt(endemic) + " spectral " + fmt(endemic_spectral) + ", R0(baseline)=" +
                  fmt(base) + " spectral " + fmt(base_spectral)};
}

Outcome endemic_certificate() {
  const auto p = ModelParams{}.with(Param::beta_a, 0.46665);
  const auto eq = solve_endemic(p);
  const auto none = solve_endemic(ModelParams{});
  if (!eq) return {false, "no endemic root found"};
  const double residual = drift(eq->state, p).max_norm();
  const double e_max = admissible_e_max(p);
  const bool ok = residual < 1e-8 && eq->state.e > 0.0 && eq->state.e < e_max && !none.has_value();
  return {ok, "E**=" + fmt(eq->state.e) + " in (0, " + fmt(e_max) + "), drift max-norm " + fmt(residual) +
                  ", baseline " + (none ? "FOUND a root" : "absent")};
}

Outcome dfe_convergence() {
  const auto traj = integrate_ode(ModelParams{}, {2999, 1, 0, 0, 0, 0}, SimConfig{});
  const auto& x = traj.states.back();
  const double load = x.e + x.i_s + x.i_a + x.b;
  const bool ok = load < 1e-3 && std::abs(x.s - 3000.0) <= 30.0 && std::abs(traj.times.back() - 500.0) < 1e-9;
  return {ok, "at t=" + fmt(traj.times.back()) + ": E+I_s+I_a+B=" + fmt(load) + ", S=" + fmt(x.s)};
}

Outcome em_order() {
  // dS = -a S dt + s S dW (model with lambda=0, only S present) against
  // S0 exp((-a - s^2/2) T + s W_T) built from the same increments.
  const double a = 1.0;
  const double s = 1.0;
  const ModelParams p = ModelParams{}.with(Param::lambda, 0.0).with(Param::mu, a);
  const NoiseIntensities n{s, 0, 0, 0, 0};
  std::vector<double> x;
  std::vector<double> y;
  std::ostringstream errs;
  for (int k = 4; k <= 10; ++k) {
    SimConfig cfg;
    cfg.t_end = 1.0;
    cfg.dt = std::ldexp(1.0, -k);
    cfg.record_stride = std::size_t{1} << k;
    double total = 0.0;
    for (std::uint64_t path = 0; path < 200; ++path) {
      const NoiseStream stream{777, path};
      const auto traj = integrate_sde(p, n, HerdState{.s = 1.0}, cfg, stream);
      double w = 0.0;
      for (std::size_t step = 0; step < cfg.step_count(); ++step) w += wiener_increment(stream, step, cfg.dt)[0];
      total += std::abs(traj.states.back().s - std::exp((-a - 0.5 * s * s) + s * w));
    }
    x.push_back(-k);
    y.push_back(std::log2(total / 200.0));
    errs << (k == 4 ? "" : " ") << fmt(total / 200.0);
  }
  const double m = slope(x, y);
  return {std::abs(m - 0.5) <= 0.15, "fitted slope " + fmt(m) + "; errors " + errs.str()};
}

Outcome positivity() {
  const ModelParams p;
  SimConfig cfg;
  cfg.record_stride = 10;
  const HerdState init{2999, 1, 0, 0, 0, 0};
  const auto samples = sample_ensemble(p, NoiseIntensities{}, init, cfg, 500, 42);
  double min_value = INFINITY;
  for (double v : samples.values) min_value = std::min(min_value, v);
  const double cap = std::max(total_population(init), p->lambda_recruit / p->mu);
  double worst_excess = -INFINITY;
  std::vector<double> ns(samples.n_paths);
  for (std::size_t t = 0; t < samples.times.size(); ++t) {
    for (std::size_t path = 0; path < samples.n_paths; ++path) {
      double total = 0.0;
      for (std::size_t c = 0; c < kCompartments; ++c) {
        if (c != 5) total += samples.at(path, t, c);
      }
      ns[path] = total;
    }
    const double mean = pairwise_sum(ns) / static_cast<double>(ns.size());
    double ss = 0.0;
    for (double v : ns) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / static_cast<double>(ns.size() - 1) / static_cast<double>(ns.size()));
    worst_excess = std::max(worst_excess, mean - (cap + 3.0 * se));
  }
  const bool ok = min_value >= 0.0 && worst_excess <= 0.0;
  return {ok, "min recorded value " + fmt(min_value) + ", max of mean(N) - (" + fmt(cap) + " + 3 SE) = " +
                  fmt(worst_excess)};
}

Outcome prcc_signs() {
  const ModelParams base;
  const auto rep = sensitivity_of_r0(base, ParamRanges::around(base), 1000, 42);
  bool ok = true;
  std::ostringstream os;
  for (const char* name : {"beta_a", "beta_s", "sigma", "gamma", "delta", "nu"}) {
    const auto& e = rep.at(name);
    const bool want_positive = std::string(name) == "beta_a" || std::string(name) == "beta_s" ||
                               std::string(name) == "sigma";
    ok = ok && e.significant && e.p_value < 0.05 && (want_positive ? e.prcc > 0.0 : e.prcc < 0.0);
    os << name << '=' << fmt(e.prcc) << " (p=" << fmt(e.p_value) << ") ";
  }
  ok = ok && std::abs(rep.at("beta_a").prcc) > std::abs(rep.at("beta_s").prcc);
  return {ok, os.str()};
}

Outcome peak_orderings() {
  const HerdState init{2999, 1, 0, 0, 0, 0};
  SimConfig cfg;
  cfg.record_stride = 10;
  auto peak = [&](const ModelParams& p) { return peak_of(integrate_ode(p, init, cfg), 2); };
  const auto fast = peak(ModelParams{}.with(Param::beta_a, 0.7));
  const auto slow = peak(ModelParams{}.with(Param::beta_a, 0.09));
  const auto endemic = ModelParams{}.with(Param::beta_a, 0.46665);
  const auto short_rec = peak(endemic.with(Param::gamma, 0.05));
  const auto long_rec = peak(endemic.with(Param::gamma, 0.4));
  const bool ok = fast.value > slow.value && fast.time < slow.time && short_rec.value > long_rec.value;
  return {ok, "beta_a 0.7 peak " + fmt(fast.value) + " at t=" + fmt(fast.time) + " vs beta_a 0.09 peak " +
                  fmt(slow.value) + " at t=" + fmt(slow.time) + "; gamma 0.05 peak " + fmt(short_rec.value) +
                  " vs gamma 0.4 peak " + fmt(long_rec.value)};
}

Outcome noise_ordering() {
  const auto p = ModelParams{}.with(Param::beta_a, 0.46665);
  SimConfig cfg;
  cfg.record_stride = 100;
  std::vector<double> stds;
  std::ostringstream os;
  for (double level : {0.01, 0.05, 0.10}) {
    const NoiseIntensities n{level, level, level, level, 0.05};
    const auto summary = run_ensemble(p, n, default_initial_state(p), cfg, 500, 42);
    stds.push_back(time_averaged_std(summary, 2));
    os << "sigma=" << level << ": " << fmt(stds.back()) << ' ';
  }
  return {stds[0] < stds[1] && stds[1] < stds[2], os.str()};
}

Outcome reproducibility() {
  const auto dir = fs::temp_directory_path() / "hpai_acceptance";
  fs::create_directories(dir);
  const auto cfg_path = (dir / "run.cfg").string();
  {
    RunConfig cfg;
    cfg.params = ModelParams{}.with(Param::beta_a, 0.46665);
    cfg.sim.t_end = 100.0;
    std::ofstream(cfg_path) << format_config(cfg);
  }
  const std::string cli = HPAI_CLI_PATH;
  auto run = [&](const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " --config \"" + cfg_path + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) throw std::runtime_error("command failed: " + cmd);
  };
  auto file = [&](const char* name) { return (dir / name).string(); };
  run("simulate --mode sde --seed 42 --out \"" + file("sde_a.csv") + "\"");
  run("simulate --mode sde --seed 42 --out \"" + file("sde_b.csv") + "\"");
  run("ensemble --paths 50 --seed 42 --threads 1 --out \"" + file("ens_a.csv") + "\"");
  run("ensemble --paths 50 --seed 42 --threads 4 --out \"" + file("ens_b.csv") + "\"");
  const bool sde_same = read_text_file(file("sde_a.csv")) == read_text_file(file("sde_b.csv"));
  const bool ens_same = read_text_file(file("ens_a.csv")) == read_text_file(file("ens_b.csv"));

  const auto p = ModelParams{}.with(Param::beta_a, 0.46665);
  SimConfig sim;
  sim.t_end = 200.0;
  sim.record_stride = 50;
  EnsembleOptions serial;
  serial.threads = 1;
  EnsembleOptions parallel;
  parallel.threads = 8;
  const auto a = run_ensemble(p, NoiseIntensities::uniform(0.1), default_initial_state(p), sim, 200, 9, serial);
  const auto b = run_ensemble(p, NoiseIntensities::uniform(0.1), default_initial_state(p), sim, 200, 9, parallel);
  double worst = 0.0;
  for (std::size_t c = 0; c < kCompartments; ++c) {
    for (std::size_t t = 0; t < a.times.size(); ++t) {
      for (auto field : {&CompartmentStats::mean, &CompartmentStats::std, &CompartmentStats::q025,
                         &CompartmentStats::q50, &CompartmentStats::q975}) {
        worst = std::max(worst, hpai::testing::rel_diff((a.stats[c].*field)[t], (b.stats[c].*field)[t]));
      }
    }
  }
  const bool ok = sde_same && ens_same && worst <= 1e-12;
  return {ok, std::string("SDE CSVs ") + (sde_same ? "byte-identical" : "DIFFER") + ", ensemble CSVs (1 vs 4 threads) " +
                  (ens_same ? "byte-identical" : "DIFFER") + ", serial vs parallel max relative difference " +
                  fmt(worst)};
}

}  // namespace

int main() {
  criterion(1, "R0 closed form vs spectral radius", 1.0, r0_oracles);
  criterion(2, "R0 reference values", 0.0, r0_values);
  criterion(3, "endemic equilibrium certificate", 1.0, endemic_certificate);
  criterion(4, "baseline ODE converges to the disease-free state", 1.0, dfe_convergence);
  criterion(5, "Euler-Maruyama strong order one half", 30.0, em_order);
  criterion(6, "positivity and bounded mean population", 60.0, positivity);
  criterion(7, "PRCC signs and significance", 10.0, prcc_signs);
  criterion(8, "peak orderings", 5.0, peak_orderings);
  criterion(9, "noise intensity ordering of I_s spread", 120.0, noise_ordering);
  criterion(10, "reproducibility", 0.0, reproducibility);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
