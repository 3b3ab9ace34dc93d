#include "hpai/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "hpai/config.hpp"
#include "hpai/csv.hpp"
#include "hpai/ensemble.hpp"
#include "hpai/equilibrium.hpp"
#include "hpai/integrate.hpp"
#include "hpai/sensitivity.hpp"
#include "hpai/svg.hpp"

namespace hpai {
namespace {

struct Options {
  std::string config;
  std::string out;
  std::string svg;
  std::string mode = "ode";
  std::string ranges;
  std::string paths_out;
  std::string metric = "r0";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<std::size_t> stride;
  std::size_t samples = kDefaultLhsSamples;
  std::size_t threads = 0;
  double extinction_threshold = kDefaultExtinctionThreshold;
};

RunConfig config_from(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.paths) cfg.n_paths = *o.paths;
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path);
  return f;
}

std::string describe(const HerdState& x) {
  std::ostringstream os;
  for (std::size_t c = 0; c < kCompartments; ++c) {
    os << (c ? " " : "") << kCompartmentNames[c] << '=' << format_double(x[c]);
  }
  return os.str();
}

void cmd_r0(const Options& o, std::ostream& out) {
  const RunConfig cfg = config_from(o);
  const double closed = r0_closed_form(cfg.params);
  const double spectral = r0_spectral(cfg.params);
  out << std::fixed << std::setprecision(6) << "closed_form=" << closed << '\n'
      << "spectral=" << spectral << '\n'
      << std::scientific << std::setprecision(3) << "difference=" << std::abs(closed - spectral) << '\n'
      << std::fixed << std::setprecision(6) << "invasion_number=" << invasion_number(cfg.params)
      << '\n';
}

void print_endemic(const EndemicEquilibrium& eq, std::ostream& out) {
  out << "endemic " << describe(eq.state) << '\n'
      << "lambda_star=" << format_double(eq.lambda_star) << '\n'
      << "n_star=" << format_double(eq.n_star) << '\n'
      << "residual=" << format_double(eq.residual_norm) << '\n';
}

int cmd_equilibrium(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = config_from(o);
  out << "dfe " << describe(disease_free_equilibrium(cfg.params)) << '\n';
  const auto roots = solve_endemic_all(cfg.params);
  if (roots.empty()) {
    out << "no admissible endemic root\n";
    return kExitOk;
  }
  if (roots.size() > 1) {
    out << "multiple admissible endemic roots: " << roots.size() << '\n';
    err << "warning: " << roots.size() << " endemic roots bracketed; all are listed\n";
  }
  bool accepted = true;
  for (const auto& eq : roots) {
    print_endemic(eq, out);
    accepted = accepted && eq.residual_norm < kResidualAcceptance;
  }
  if (!accepted) {
    err << "endemic residual exceeds " << kResidualAcceptance << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  RunConfig cfg = config_from(o);
  cfg.sim.record_stride = o.stride.value_or(1);
  Trajectory traj;
  if (o.mode == "ode") {
    traj = integrate_ode(cfg.params, cfg.init, cfg.sim);
  } else {
    traj = integrate_sde(cfg.params, cfg.noise, cfg.init, cfg.sim, NoiseStream{cfg.seed, 0});
  }
  auto f = open_out(o.out);
  write_trajectory_csv(f, traj);
  if (!o.svg.empty()) {
    auto s = open_out(o.svg);
    write_trajectory_svg(s, traj);
  }
  out << "wrote " << traj.size() << " rows to " << o.out << '\n';
  return kExitOk;
}

int cmd_ensemble(const Options& o, std::ostream& out) {
  RunConfig cfg = config_from(o);
  cfg.sim.validate();
  const auto daily = static_cast<std::size_t>(std::max(1LL, std::llround(1.0 / cfg.sim.dt)));
  cfg.sim.record_stride = o.stride.value_or(daily);

  EnsembleOptions opts;
  opts.threads = o.threads;
  opts.extinction_threshold = o.extinction_threshold;
  if (!o.paths_out.empty()) {
    std::filesystem::create_directories(o.paths_out);
    const std::filesystem::path dir(o.paths_out);
    opts.on_path = [dir](std::size_t i, const Trajectory& traj) {
      std::ostringstream name;
      name << "path_" << std::setw(5) << std::setfill('0') << i << ".csv";
      auto f = open_out((dir / name.str()).string());
      write_trajectory_csv(f, traj);
    };
  }
  const auto summary = run_ensemble(cfg.params, cfg.noise, cfg.init, cfg.sim, cfg.n_paths, cfg.seed, opts);
  auto f = open_out(o.out);
  write_ensemble_csv(f, summary);
  if (!o.svg.empty()) {
    auto s = open_out(o.svg);
    write_ensemble_svg(s, summary);
  }
  out << "paths=" << summary.n_paths << " seed=" << summary.master_seed << '\n'
      << "extinct_fraction=" << format_double(summary.extinct_fraction) << '\n'
      << "wrote " << summary.times.size() * kCompartments << " rows to " << o.out << '\n';
  return kExitOk;
}

int cmd_sensitivity(const Options& o, std::ostream& out) {
  RunConfig cfg = config_from(o);
  const ParamRanges ranges = o.ranges.empty() ? ParamRanges::around(cfg.params) : load_ranges(o.ranges);
  SensitivityReport report;
  if (o.metric == "r0") {
    report = sensitivity_of_r0(cfg.params, ranges, o.samples, cfg.seed);
  } else {
    cfg.sim.record_stride = o.stride.value_or(1);
    report = sensitivity_of_peak(cfg.params, cfg.init, cfg.sim, ranges, o.samples, cfg.seed, o.threads);
  }
  auto f = open_out(o.out);
  write_sensitivity_csv(f, report);
  if (!o.svg.empty()) {
    auto s = open_out(o.svg);
    write_prcc_svg(s, report);
  }
  for (const auto& e : report.entries) {
    out << e.name << " prcc=" << format_double(e.prcc) << " p=" << format_double(e.p_value)
        << (e.significant ? " *" : "") << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic SEIsIaR-B herd model of avian influenza in dairy cattle", "hpai"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Run configuration (key = value)")->check(CLI::ExistingFile);
  };
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "Master seed"); };

  auto* r0 = app.add_subcommand("r0", "Basic reproduction number (closed form and spectral)");
  add_config(r0);

  auto* eq = app.add_subcommand("equilibrium", "Disease-free and endemic equilibria");
  add_config(eq);

  auto* sim = app.add_subcommand("simulate", "Single deterministic or stochastic trajectory");
  add_config(sim);
  sim->add_option("--mode", o.mode, "ode | sde")->check(CLI::IsMember({"ode", "sde"}));
  sim->add_option("--out", o.out, "Trajectory CSV")->required();
  sim->add_option("--svg", o.svg, "Optional SVG plot");
  sim->add_option("--stride", o.stride, "Record every N steps (default 1)")->check(CLI::PositiveNumber);
  add_seed(sim);

  auto* ens = app.add_subcommand("ensemble", "Seeded ensemble of stochastic paths");
  add_config(ens);
  ens->add_option("--paths", o.paths, "Number of paths (overrides n_paths)")->check(CLI::PositiveNumber);
  ens->add_option("--out", o.out, "Summary CSV")->required();
  ens->add_option("--paths-out", o.paths_out, "Directory for per-path trajectory CSVs");
  ens->add_option("--svg", o.svg, "Optional SVG plot");
  ens->add_option("--stride", o.stride, "Record every N steps (default: daily)")->check(CLI::PositiveNumber);
  ens->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  ens->add_option("--extinction-threshold", o.extinction_threshold, "Head count for extinction")
      ->check(CLI::NonNegativeNumber);
  add_seed(ens);

  auto* sens = app.add_subcommand("sensitivity", "LHS/PRCC sensitivity analysis");
  add_config(sens);
  sens->add_option("--ranges", o.ranges, "Ranges file (key = low, high); default baseline +/-50%")
      ->check(CLI::ExistingFile);
  sens->add_option("--samples", o.samples, "LHS sample size")->check(CLI::PositiveNumber);
  sens->add_option("--out", o.out, "Report CSV")->required();
  sens->add_option("--svg", o.svg, "Optional PRCC bar chart");
  sens->add_option("--metric", o.metric, "r0 | peak_is")->check(CLI::IsMember({"r0", "peak_is"}));
  sens->add_option("--stride", o.stride, "Record stride for peak_is runs")->check(CLI::PositiveNumber);
  sens->add_option("--threads", o.threads, "Worker threads for peak_is (0: all cores)");
  add_seed(sens);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (r0->parsed()) {
      cmd_r0(o, out);
      return kExitOk;
    }
    if (eq->parsed()) return cmd_equilibrium(o, out, err);
    if (sim->parsed()) return cmd_simulate(o, out);
    if (ens->parsed()) return cmd_ensemble(o, out);
    if (sens->parsed()) return cmd_sensitivity(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace hpai
