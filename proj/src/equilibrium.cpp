#include "hpai/equilibrium.hpp"

#include <cmath>
#include <string>

#include "hpai/error.hpp"

namespace hpai {
namespace {

// Scan endpoints are pulled this far (relative) inside the open interval.
constexpr double kEndpointInset = 1e-9;

void check_admissible(double e_star, const ModelParams& p) {
  const double e_max = admissible_e_max(p);
  if (!(e_star > 0.0 && e_star < e_max)) {
    throw ValidationError("E** = " + std::to_string(e_star) +
                          " outside admissible interval (0, " + std::to_string(e_max) + ")");
  }
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

EquilibriumIntermediates intermediates(const ModelParams& p) {
  const auto& q = p.values();
  const double out_s = q.mu + q.d_dis + q.gamma_rem;
  const double out_a = q.delta_rem + q.mu + q.d_dis;
  if (!(out_s > 0.0 && out_a > 0.0 && q.mu > 0.0 && q.eps_decay > 0.0)) {
    throw ValidationError("endemic intermediates require positive removal and decay rates");
  }
  EquilibriumIntermediates im;
  im.alpha_s = q.nu * q.sigma_prog / out_s;
  im.alpha_a = (1.0 - q.nu) * q.sigma_prog / out_a;
  im.rho = (q.gamma_rem * im.alpha_s + q.delta_rem * im.alpha_a) / q.mu;
  im.zeta = (q.omega_s * im.alpha_s + q.omega_a * im.alpha_a) / q.eps_decay;
  im.c = 1.0 + im.alpha_s + im.alpha_a + im.rho;
  im.a1 = q.beta_s * im.alpha_s + q.beta_a * im.alpha_a;
  im.a2 = q.beta_b * im.zeta;
  return im;
}

double admissible_e_max(const ModelParams& p) {
  return p->lambda_recruit / (p->sigma_prog + p->mu);
}

double pressure_from_e(double e_star, const ModelParams& p) {
  check_admissible(e_star, p);
  const double outflow = p->sigma_prog + p->mu;
  return outflow * p->mu * e_star / (p->lambda_recruit - outflow * e_star);
}

double endemic_gap(double e_star, const ModelParams& p, const EquilibriumIntermediates& im) {
  const double lambda = pressure_from_e(e_star, p);
  const double outflow = p->sigma_prog + p->mu;
  const double s = p->lambda_recruit / (p->mu + lambda);
  const double n = s + im.c * e_star;
  const double lhs = outflow * p->mu / (p->lambda_recruit - outflow * e_star);
  return lhs - im.a1 / n - im.a2 / (p->k_half + im.zeta * e_star);
}

EndemicEquilibrium recover_equilibrium(double e_star, const ModelParams& p,
                                       const EquilibriumIntermediates& im) {
  EndemicEquilibrium eq;
  eq.lambda_star = pressure_from_e(e_star, p);
  eq.state.s = p->lambda_recruit / (p->mu + eq.lambda_star);
  eq.state.e = e_star;
  eq.state.i_s = im.alpha_s * e_star;
  eq.state.i_a = im.alpha_a * e_star;
  eq.state.r = im.rho * e_star;
  eq.state.b = im.zeta * e_star;
  eq.n_star = eq.state.s + im.c * e_star;
  eq.residual_norm = drift(eq.state, p).max_norm();
  return eq;
}

std::vector<EndemicEquilibrium> solve_endemic_all(const ModelParams& p, double tol,
                                                  int scan_intervals) {
  if (!(tol > 0.0)) throw ValidationError("equilibrium tolerance must be positive");
  if (scan_intervals < 2) throw ValidationError("scan needs at least 2 subintervals");

  std::vector<EndemicEquilibrium> roots;
  const double e_max = admissible_e_max(p);
  if (!(e_max > 0.0)) return roots;

  const auto im = intermediates(p);
  auto gap = [&](double e) { return endemic_gap(e, p, im); };

  std::vector<double> grid(static_cast<std::size_t>(scan_intervals) + 1);
  grid.front() = e_max * kEndpointInset;
  for (int i = 1; i < scan_intervals; ++i) grid[i] = e_max * i / scan_intervals;
  grid.back() = e_max * (1.0 - kEndpointInset);

  const double width = tol * e_max;
  double lo = grid[0];
  double g_lo = gap(lo);
  if (g_lo == 0.0) roots.push_back(recover_equilibrium(lo, p, im));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double hi = grid[i];
    const double g_hi = gap(hi);
    if (g_hi == 0.0) {
      roots.push_back(recover_equilibrium(hi, p, im));
    } else if (sign_of(g_lo) * sign_of(g_hi) < 0) {
      double a = lo;
      double b = hi;
      int s_a = sign_of(g_lo);
      while (b - a > width) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double g_mid = gap(mid);
        if (g_mid == 0.0) {
          a = b = mid;
          break;
        }
        if (sign_of(g_mid) == s_a) {
          a = mid;
        } else {
          b = mid;
        }
      }
      roots.push_back(recover_equilibrium(0.5 * (a + b), p, im));
    }
    lo = hi;
    g_lo = g_hi;
  }
  return roots;
}

MultipleRootsError::MultipleRootsError(std::vector<EndemicEquilibrium> roots)
    : std::runtime_error(std::to_string(roots.size()) + " admissible endemic roots bracketed"),
      roots_(std::move(roots)) {}

std::optional<EndemicEquilibrium> solve_endemic(const ModelParams& p, double tol) {
  auto roots = solve_endemic_all(p, tol);
  if (roots.empty()) return std::nullopt;
  if (roots.size() > 1) throw MultipleRootsError(std::move(roots));
  return roots.front();
}

}  // namespace hpai
