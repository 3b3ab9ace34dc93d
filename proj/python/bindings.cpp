#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

#include "hpai/config.hpp"
#include "hpai/ensemble.hpp"
#include "hpai/equilibrium.hpp"
#include "hpai/integrate.hpp"
#include "hpai/model.hpp"
#include "hpai/sensitivity.hpp"

namespace py = pybind11;
using namespace hpai;

namespace {

using Overrides = std::map<std::string, double>;

ModelParams make_params(const Overrides& overrides) {
  ModelParams p;
  for (const auto& [key, value] : overrides) {
    const auto id = param_from_name(key);
    if (!id) throw ValidationError("unknown parameter '" + key + "'");
    p = p.with(*id, value);
  }
  return p;
}

Overrides params_dict(const ModelParams& p) {
  Overrides out;
  for (std::size_t i = 0; i < kParamCount; ++i) {
    const auto id = static_cast<Param>(i);
    out[std::string(param_name(id))] = p[id];
  }
  return out;
}

HerdState make_state(const std::array<double, kCompartments>& x) {
  return {x[0], x[1], x[2], x[3], x[4], x[5]};
}

std::array<double, kCompartments> state_array(const HerdState& x) {
  return {x.s, x.e, x.i_s, x.i_a, x.r, x.b};
}

NoiseIntensities make_noise(const std::optional<std::array<double, 5>>& n) {
  if (!n) return {};
  return {(*n)[0], (*n)[1], (*n)[2], (*n)[3], (*n)[4]};
}

SimConfig make_sim(double t_end, double dt, std::size_t stride, const std::string& negativity) {
  SimConfig cfg;
  cfg.t_end = t_end;
  cfg.dt = dt;
  cfg.record_stride = stride;
  if (negativity == "truncate") {
    cfg.negativity = NegativityPolicy::truncate;
  } else if (negativity == "reject") {
    cfg.negativity = NegativityPolicy::reject;
  } else {
    throw ValidationError("negativity must be 'truncate' or 'reject'");
  }
  return cfg;
}

HerdState init_or_default(const std::optional<std::array<double, kCompartments>>& init,
                          const ModelParams& p) {
  return init ? make_state(*init) : default_initial_state(p);
}

py::tuple trajectory_arrays(const Trajectory& traj) {
  py::array_t<double> times(static_cast<py::ssize_t>(traj.size()));
  py::array_t<double> states({static_cast<py::ssize_t>(traj.size()), static_cast<py::ssize_t>(kCompartments)});
  auto t = times.mutable_unchecked<1>();
  auto s = states.mutable_unchecked<2>();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    t(static_cast<py::ssize_t>(i)) = traj.times[i];
    for (std::size_t c = 0; c < kCompartments; ++c) {
      s(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(c)) = traj.states[i][c];
    }
  }
  return py::make_tuple(times, states);
}

py::dict report_dict(const SensitivityReport& rep) {
  py::dict out;
  for (const auto& e : rep.entries) {
    py::dict row;
    row["prcc"] = e.prcc;
    row["p_value"] = e.p_value;
    row["significant"] = e.significant;
    row["status"] = e.status == PrccStatus::ok ? "ok" : e.status == PrccStatus::constant ? "constant" : "collinear";
    out[py::str(e.name)] = row;
  }
  return out;
}

ParamRanges make_ranges(const std::optional<std::map<std::string, std::pair<double, double>>>& ranges,
                        const ModelParams& base) {
  if (!ranges) return ParamRanges::around(base);
  ParamRanges out;
  for (const auto& [key, lh] : *ranges) {
    const auto id = param_from_name(key);
    if (!id) throw ValidationError("unknown parameter '" + key + "'");
    out.entries.push_back({*id, lh.first, lh.second});
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stochastic SEIsIaR-B herd model of avian influenza in dairy cattle";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.attr("compartments") = py::make_tuple("S", "E", "I_s", "I_a", "R", "B");

  m.def("default_params", [] { return params_dict(ModelParams{}); },
        "Baseline parameter values keyed by name.");
  m.def(
      "r0_closed_form", [](const Overrides& p) { return r0_closed_form(make_params(p)); },
      py::arg("params") = Overrides{});
  m.def(
      "r0_spectral", [](const Overrides& p) { return r0_spectral(make_params(p)); },
      py::arg("params") = Overrides{});
  m.def(
      "invasion_number", [](const Overrides& p) { return invasion_number(make_params(p)); },
      py::arg("params") = Overrides{});
  m.def(
      "disease_free_equilibrium",
      [](const Overrides& p) { return state_array(disease_free_equilibrium(make_params(p))); },
      py::arg("params") = Overrides{});
  m.def(
      "drift",
      [](const std::array<double, kCompartments>& x, const Overrides& p) {
        const auto d = drift(make_state(x), make_params(p));
        std::array<double, kCompartments> out{};
        for (std::size_t c = 0; c < kCompartments; ++c) out[c] = d[c];
        return out;
      },
      py::arg("state"), py::arg("params") = Overrides{});

  m.def(
      "solve_endemic",
      [](const Overrides& p, double tol) -> py::object {
        const auto roots = solve_endemic_all(make_params(p), tol);
        py::list out;
        for (const auto& eq : roots) {
          py::dict d;
          d["state"] = state_array(eq.state);
          d["lambda_star"] = eq.lambda_star;
          d["n_star"] = eq.n_star;
          d["residual"] = eq.residual_norm;
          out.append(d);
        }
        return out;
      },
      py::arg("params") = Overrides{}, py::arg("tol") = kDefaultEquilibriumTol,
      "All admissible endemic equilibria (empty list if none).");

  m.def(
      "simulate_ode",
      [](const Overrides& po, std::optional<std::array<double, kCompartments>> init, double t_end, double dt,
         std::size_t stride, const std::string& method) {
        const auto p = make_params(po);
        if (method != "rk4" && method != "euler") throw ValidationError("method must be 'rk4' or 'euler'");
        Trajectory traj;
        {
          py::gil_scoped_release release;
          traj = integrate_ode(p, init_or_default(init, p), make_sim(t_end, dt, stride, "truncate"),
                               method == "rk4" ? OdeMethod::rk4 : OdeMethod::euler);
        }
        return trajectory_arrays(traj);
      },
      py::arg("params") = Overrides{}, py::arg("init") = py::none(), py::arg("t_end") = 500.0,
      py::arg("dt") = 0.01, py::arg("stride") = 1, py::arg("method") = "rk4",
      "Returns (times, states[n, 6]).");

  m.def(
      "simulate_sde",
      [](const Overrides& po, std::optional<std::array<double, 5>> noise,
         std::optional<std::array<double, kCompartments>> init, double t_end, double dt, std::size_t stride,
         std::uint64_t seed, std::uint64_t path, const std::string& negativity) {
        const auto p = make_params(po);
        Trajectory traj;
        {
          py::gil_scoped_release release;
          traj = integrate_sde(p, make_noise(noise), init_or_default(init, p),
                               make_sim(t_end, dt, stride, negativity), NoiseStream{seed, path});
        }
        return trajectory_arrays(traj);
      },
      py::arg("params") = Overrides{}, py::arg("noise") = py::none(), py::arg("init") = py::none(),
      py::arg("t_end") = 500.0, py::arg("dt") = 0.01, py::arg("stride") = 1, py::arg("seed") = kDefaultSeed,
      py::arg("path") = 0, py::arg("negativity") = "truncate",
      "Euler-Maruyama path; noise is (sig_s, sig_e, sig_is, sig_ia, sig_b).");

  m.def(
      "run_ensemble",
      [](const Overrides& po, std::optional<std::array<double, 5>> noise,
         std::optional<std::array<double, kCompartments>> init, std::size_t n_paths, std::uint64_t seed,
         double t_end, double dt, std::size_t stride, std::size_t threads, double extinction_threshold) {
        const auto p = make_params(po);
        EnsembleOptions opts;
        opts.threads = threads;
        opts.extinction_threshold = extinction_threshold;
        EnsembleSummary s;
        {
          py::gil_scoped_release release;
          s = run_ensemble(p, make_noise(noise), init_or_default(init, p), make_sim(t_end, dt, stride, "truncate"),
                           n_paths, seed, opts);
        }
        py::dict out;
        out["times"] = s.times;
        out["extinct_fraction"] = s.extinct_fraction;
        out["n_paths"] = s.n_paths;
        out["seed"] = s.master_seed;
        for (std::size_t c = 0; c < kCompartments; ++c) {
          py::dict st;
          st["mean"] = s.stats[c].mean;
          st["std"] = s.stats[c].std;
          st["q025"] = s.stats[c].q025;
          st["q50"] = s.stats[c].q50;
          st["q975"] = s.stats[c].q975;
          out[py::str(std::string(kCompartmentNames[c]))] = st;
        }
        return out;
      },
      py::arg("params") = Overrides{}, py::arg("noise") = py::none(), py::arg("init") = py::none(),
      py::arg("n_paths") = kDefaultPaths, py::arg("seed") = kDefaultSeed, py::arg("t_end") = 500.0,
      py::arg("dt") = 0.01, py::arg("stride") = 100, py::arg("threads") = 0,
      py::arg("extinction_threshold") = kDefaultExtinctionThreshold);

  m.def(
      "lhs_sample",
      [](const std::map<std::string, std::pair<double, double>>& ranges, std::size_t n, std::uint64_t seed) {
        return lhs_sample(make_ranges(ranges, ModelParams{}), n, seed);
      },
      py::arg("ranges"), py::arg("n"), py::arg("seed") = kDefaultSeed,
      "Columns follow the sorted parameter names of `ranges`.");

  m.def(
      "prcc",
      [](const Eigen::MatrixXd& samples, const std::vector<double>& outputs, std::vector<std::string> names,
         double alpha) {
        if (names.empty()) {
          for (Eigen::Index j = 0; j < samples.cols(); ++j) names.push_back("x" + std::to_string(j));
        }
        return report_dict(prcc(samples, outputs, names, alpha));
      },
      py::arg("samples"), py::arg("outputs"), py::arg("names") = std::vector<std::string>{},
      py::arg("alpha") = kDefaultSignificance);

  m.def(
      "sensitivity_r0",
      [](const Overrides& po, std::optional<std::map<std::string, std::pair<double, double>>> ranges,
         std::size_t n, std::uint64_t seed) {
        const auto base = make_params(po);
        return report_dict(sensitivity_of_r0(base, make_ranges(ranges, base), n, seed));
      },
      py::arg("params") = Overrides{}, py::arg("ranges") = py::none(), py::arg("n") = kDefaultLhsSamples,
      py::arg("seed") = kDefaultSeed);

  m.def(
      "parse_config",
      [](const std::string& text) {
        const auto cfg = parse_config(text);
        py::dict out;
        out["params"] = params_dict(cfg.params);
        out["noise"] = std::array<double, 5>{cfg.noise.sig_s, cfg.noise.sig_e, cfg.noise.sig_is, cfg.noise.sig_ia,
                                             cfg.noise.sig_b};
        out["init"] = state_array(cfg.init);
        out["t_end"] = cfg.sim.t_end;
        out["dt"] = cfg.sim.dt;
        out["n_paths"] = cfg.n_paths;
        out["seed"] = cfg.seed;
        return out;
      },
      py::arg("text"));
}
