#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hpai/model.hpp"
#include "hpai/rng.hpp"

namespace hpai {

enum class NegativityPolicy {
  truncate,  // clamp negative components to 0 after every step
  reject,    // tolerate only (-kNegativityTolerance, 0), otherwise throw NumericError
};

inline constexpr double kNegativityTolerance = 1e-12;

enum class OdeMethod { rk4, euler };

struct SimConfig {
  double t_end = 500.0;  // days
  double dt = 0.01;      // days
  std::size_t record_stride = 1;
  NegativityPolicy negativity = NegativityPolicy::truncate;

  // Throws ValidationError unless t_end > 0, 0 < dt <= t_end, stride >= 1 and
  // t_end is an integer multiple of dt (to 1e-9 relative).
  void validate() const;
  std::size_t step_count() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<HerdState> states;
  std::optional<std::uint64_t> seed;  // master seed for stochastic runs

  std::size_t size() const { return times.size(); }
};

// Fixed-step deterministic integration; t_k = k * dt.
Trajectory integrate_ode(const ModelParams& p, const HerdState& init, const SimConfig& cfg,
                         OdeMethod method = OdeMethod::rk4);

// Euler-Maruyama: X_{k+1} = X_k + f(X_k) dt + g(X_k) dW_k with dW_k drawn
// from `stream` at step k. R receives drift only.
Trajectory integrate_sde(const ModelParams& p, const NoiseIntensities& n, const HerdState& init,
                         const SimConfig& cfg, const NoiseStream& stream);

struct Peak {
  double time = 0.0;
  double value = 0.0;
};

// First recorded maximum of one compartment.
Peak peak_of(const Trajectory& traj, std::size_t compartment);

}  // namespace hpai
