#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "hpai/model.hpp"

namespace hpai {

/// Quantities that express the endemic state as multiples of E**.
struct EquilibriumIntermediates {
  double alpha_s = 0.0;  // I_s** / E**
  double alpha_a = 0.0;  // I_a** / E**
  double rho = 0.0;      // R** / E**
  double zeta = 0.0;     // B** / E**
  double c = 1.0;        // (N** - S**) / E**
  double a1 = 0.0;       // beta_s alpha_s + beta_a alpha_a
  double a2 = 0.0;       // beta_B zeta
};

struct EndemicEquilibrium {
  HerdState state;
  double lambda_star = 0.0;  // infection pressure at equilibrium, 1/day
  double n_star = 0.0;
  double residual_norm = 0.0;  // max-norm of the drift at `state`
};

inline constexpr double kDefaultEquilibriumTol = 1e-12;
inline constexpr int kDefaultScanIntervals = 4096;
inline constexpr double kResidualAcceptance = 1e-8;

EquilibriumIntermediates intermediates(const ModelParams& p);

// Right end of the admissible interval (0, Lambda/(sigma+mu)) for E**.
double admissible_e_max(const ModelParams& p);

// Infection pressure implied by E** through the S and E balance equations:
// (sigma+mu) mu E / (Lambda - (sigma+mu) E). Throws ValidationError outside
// the open admissible interval.
double pressure_from_e(double e_star, const ModelParams& p);

// Signed mismatch between the pressure implied by the balance equations and
// the pressure generated by the infectious classes at E = e_star (both
// divided by E). Roots are endemic equilibria.
double endemic_gap(double e_star, const ModelParams& p, const EquilibriumIntermediates& im);

// Rebuilds the full equilibrium from a root E**.
EndemicEquilibrium recover_equilibrium(double e_star, const ModelParams& p,
                                       const EquilibriumIntermediates& im);

/// Every admissible root found by a uniform scan of `scan_intervals`
/// subintervals followed by bisection to width tol * e_max. Ordered by E**.
std::vector<EndemicEquilibrium> solve_endemic_all(const ModelParams& p,
                                                  double tol = kDefaultEquilibriumTol,
                                                  int scan_intervals = kDefaultScanIntervals);

class MultipleRootsError : public std::runtime_error {
 public:
  MultipleRootsError(std::vector<EndemicEquilibrium> roots);
  const std::vector<EndemicEquilibrium>& roots() const { return roots_; }

 private:
  std::vector<EndemicEquilibrium> roots_;
};

/// The unique endemic equilibrium, or nullopt when the gap never changes
/// sign. Throws MultipleRootsError when more than one root is bracketed.
std::optional<EndemicEquilibrium> solve_endemic(const ModelParams& p,
                                                double tol = kDefaultEquilibriumTol);

}  // namespace hpai
