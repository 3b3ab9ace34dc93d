#include "hpai/integrate.hpp"

#include <cmath>
#include <string>

#include "hpai/error.hpp"

namespace hpai {
namespace {

HerdState axpy(const HerdState& x, double h, const DriftVector& f) {
  return {x.s + h * f.ds,     x.e + h * f.de, x.i_s + h * f.di_s,
          x.i_a + h * f.di_a, x.r + h * f.dr, x.b + h * f.db};
}

HerdState rk4_step(const HerdState& x, const ModelParams& p, double h) {
  const DriftVector k1 = drift(x, p);
  const DriftVector k2 = drift(axpy(x, 0.5 * h, k1), p);
  const DriftVector k3 = drift(axpy(x, 0.5 * h, k2), p);
  const DriftVector k4 = drift(axpy(x, h, k3), p);
  HerdState out;
  for (std::size_t i = 0; i < kCompartments; ++i) {
    out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

void settle(HerdState& x, NegativityPolicy policy, std::size_t step) {
  for (std::size_t i = 0; i < kCompartments; ++i) {
    double& v = x[i];
    if (!std::isfinite(v)) {
      throw NumericError("non-finite " + std::string(kCompartmentNames[i]) + " at step " +
                         std::to_string(step));
    }
    if (v >= 0.0) continue;
    if (policy == NegativityPolicy::reject && v <= -kNegativityTolerance) {
      throw NumericError("negative " + std::string(kCompartmentNames[i]) + " = " +
                         std::to_string(v) + " at step " + std::to_string(step));
    }
    v = 0.0;
  }
}

class Recorder {
 public:
  Recorder(const SimConfig& cfg, std::size_t steps) : cfg_(cfg), steps_(steps) {
    const std::size_t count = steps / cfg.record_stride + 2;
    traj_.times.reserve(count);
    traj_.states.reserve(count);
  }

  void offer(std::size_t k, const HerdState& x) {
    if (k % cfg_.record_stride == 0 || k == steps_) {
      traj_.times.push_back(static_cast<double>(k) * cfg_.dt);
      traj_.states.push_back(x);
    }
  }

  Trajectory take() { return std::move(traj_); }

 private:
  const SimConfig& cfg_;
  std::size_t steps_;
  Trajectory traj_;
};

}  // namespace

void SimConfig::validate() const {
  if (!(std::isfinite(t_end) && t_end > 0.0)) throw ValidationError("t_end must be positive");
  if (!(std::isfinite(dt) && dt > 0.0 && dt <= t_end)) {
    throw ValidationError("dt must satisfy 0 < dt <= t_end");
  }
  if (record_stride < 1) throw ValidationError("record_stride must be >= 1");
  const double ratio = t_end / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ValidationError("t_end must be an integer multiple of dt");
  }
}

std::size_t SimConfig::step_count() const {
  validate();
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

Trajectory integrate_ode(const ModelParams& p, const HerdState& init, const SimConfig& cfg,
                         OdeMethod method) {
  init.validate();
  const std::size_t steps = cfg.step_count();
  Recorder rec(cfg, steps);
  HerdState x = init;
  rec.offer(0, x);
  for (std::size_t k = 0; k < steps; ++k) {
    x = method == OdeMethod::rk4 ? rk4_step(x, p, cfg.dt) : axpy(x, cfg.dt, drift(x, p));
    settle(x, cfg.negativity, k + 1);
    rec.offer(k + 1, x);
  }
  return rec.take();
}

Trajectory integrate_sde(const ModelParams& p, const NoiseIntensities& n, const HerdState& init,
                         const SimConfig& cfg, const NoiseStream& stream) {
  init.validate();
  n.validate();
  const std::size_t steps = cfg.step_count();
  // Noise channel -> compartment: S, E, I_s, I_a, B.
  constexpr std::array<std::size_t, kNoiseChannels> kChannel{0, 1, 2, 3, 5};

  Recorder rec(cfg, steps);
  HerdState x = init;
  rec.offer(0, x);
  for (std::size_t k = 0; k < steps; ++k) {
    const DriftVector f = drift(x, p);
    const DiffusionVector g = diffusion(x, n);
    const WienerIncrement dw = wiener_increment(stream, k, cfg.dt);
    HerdState next = axpy(x, cfg.dt, f);
    for (std::size_t c = 0; c < kNoiseChannels; ++c) {
      next[kChannel[c]] += g[kChannel[c]] * dw[c];
    }
    settle(next, cfg.negativity, k + 1);
    x = next;
    rec.offer(k + 1, x);
  }
  Trajectory traj = rec.take();
  traj.seed = stream.master_seed;
  return traj;
}

Peak peak_of(const Trajectory& traj, std::size_t compartment) {
  if (traj.size() == 0) throw ValidationError("peak of an empty trajectory");
  Peak best{traj.times[0], traj.states[0][compartment]};
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double v = traj.states[i][compartment];
    if (v > best.value) best = {traj.times[i], v};
  }
  return best;
}

}  // namespace hpai
