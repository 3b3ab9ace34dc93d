#include "hpai/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "hpai/error.hpp"

namespace hpai {
namespace {

constexpr std::array<std::string_view, kParamCount> kParamNames{
    "lambda", "mu", "beta_s", "beta_a", "beta_b",  "k",       "sigma",
    "nu",     "gamma", "delta", "d",    "omega_s", "omega_a", "epsilon"};

constexpr std::array<double ParamValues::*, kParamCount> kParamFields{
    &ParamValues::lambda_recruit, &ParamValues::mu,        &ParamValues::beta_s,
    &ParamValues::beta_a,         &ParamValues::beta_b,    &ParamValues::k_half,
    &ParamValues::sigma_prog,     &ParamValues::nu,        &ParamValues::gamma_rem,
    &ParamValues::delta_rem,      &ParamValues::d_dis,     &ParamValues::omega_s,
    &ParamValues::omega_a,        &ParamValues::eps_decay};

constexpr std::array<double HerdState::*, kCompartments> kStateFields{
    &HerdState::s, &HerdState::e, &HerdState::i_s,
    &HerdState::i_a, &HerdState::r, &HerdState::b};

constexpr std::array<double DriftVector::*, kCompartments> kDriftFields{
    &DriftVector::ds,   &DriftVector::de, &DriftVector::di_s,
    &DriftVector::di_a, &DriftVector::dr, &DriftVector::db};

std::size_t index_of(Param p) { return static_cast<std::size_t>(p); }

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

// Rows/columns ordered (E, I_s, I_a, B).
void next_generation(const ModelParams& p, double reservoir_scale,
                     Eigen::Matrix4d& f, Eigen::Matrix4d& v) {
  const auto& q = p.values();
  f.setZero();
  f(0, 1) = q.beta_s;
  f(0, 2) = q.beta_a;
  f(0, 3) = q.beta_b * reservoir_scale / q.k_half;

  v.setZero();
  v(0, 0) = q.sigma_prog + q.mu;
  v(1, 0) = -q.nu * q.sigma_prog;
  v(1, 1) = q.mu + q.d_dis + q.gamma_rem;
  v(2, 0) = (q.nu - 1.0) * q.sigma_prog;
  v(2, 2) = q.mu + q.delta_rem + q.d_dis;
  v(3, 1) = -q.omega_s;
  v(3, 2) = -q.omega_a;
  v(3, 3) = q.eps_decay;
}

double spectral_radius_of_ngm(const ModelParams& p, double reservoir_scale) {
  Eigen::Matrix4d f;
  Eigen::Matrix4d v;
  next_generation(p, reservoir_scale, f, v);
  // V is lower triangular, so it is singular iff a diagonal entry vanishes.
  for (int i = 0; i < 4; ++i) {
    if (!(std::abs(v(i, i)) > 0.0)) {
      throw NumericError("singular transition matrix V in next-generation computation");
    }
  }
  const Eigen::Matrix4d v_inv = v.partialPivLu().inverse();
  const Eigen::Matrix4d ngm = f * v_inv;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(ngm, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigenvalue computation of F V^-1 did not converge");
  }
  double radius = 0.0;
  for (int i = 0; i < 4; ++i) radius = std::max(radius, std::abs(solver.eigenvalues()(i)));
  return radius;
}

}  // namespace

std::string_view param_name(Param p) { return kParamNames[index_of(p)]; }

std::optional<Param> param_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kParamCount; ++i) {
    if (kParamNames[i] == name) return static_cast<Param>(i);
  }
  return std::nullopt;
}

double& ParamValues::operator[](Param p) { return this->*kParamFields[index_of(p)]; }
double ParamValues::operator[](Param p) const { return this->*kParamFields[index_of(p)]; }

ModelParams::ModelParams(const ParamValues& values) : values_(values) {
  for (std::size_t i = 0; i < kParamCount; ++i) {
    const auto id = static_cast<Param>(i);
    const double x = values_[id];
    require(std::isfinite(x) && x >= 0.0,
            std::string("parameter ") + std::string(param_name(id)) +
                " must be finite and nonnegative");
  }
  require(values_.nu <= 1.0, "parameter nu must lie in [0, 1]");
  require(values_.mu > 0.0, "parameter mu must be positive");
  require(values_.k_half > 0.0, "parameter k must be positive");
  require(values_.eps_decay > 0.0, "parameter epsilon must be positive");
}

ModelParams ModelParams::with(Param p, double value) const {
  ParamValues v = values_;
  v[p] = value;
  return ModelParams(v);
}

bool NoiseIntensities::is_zero() const {
  return sig_s == 0.0 && sig_e == 0.0 && sig_is == 0.0 && sig_ia == 0.0 && sig_b == 0.0;
}

void NoiseIntensities::validate() const {
  for (double x : {sig_s, sig_e, sig_is, sig_ia, sig_b}) {
    require(std::isfinite(x) && x >= 0.0, "noise intensities must be finite and nonnegative");
  }
}

double& HerdState::operator[](std::size_t i) { return this->*kStateFields.at(i); }
double HerdState::operator[](std::size_t i) const { return this->*kStateFields.at(i); }

void HerdState::validate() const {
  for (std::size_t i = 0; i < kCompartments; ++i) {
    const double x = (*this)[i];
    require(std::isfinite(x) && x >= 0.0,
            "state component " + std::string(kCompartmentNames[i]) +
                " must be finite and nonnegative");
  }
}

double DriftVector::operator[](std::size_t i) const { return this->*kDriftFields.at(i); }

double DriftVector::max_norm() const {
  double m = 0.0;
  for (std::size_t i = 0; i < kCompartments; ++i) m = std::max(m, std::abs((*this)[i]));
  return m;
}

double total_population(const HerdState& x) { return x.s + x.e + x.i_s + x.i_a + x.r; }

double force_of_infection(const HerdState& x, const ModelParams& p) {
  const auto& q = p.values();
  const double n = total_population(x);
  double lambda = q.beta_b * x.b / (q.k_half + x.b);
  if (n > 0.0) lambda += (q.beta_s * x.i_s + q.beta_a * x.i_a) / n;
  return lambda;
}

DriftVector drift(const HerdState& x, const ModelParams& p) {
  const auto& q = p.values();
  const double incidence = force_of_infection(x, p) * x.s;
  DriftVector f;
  f.ds = q.lambda_recruit - incidence - q.mu * x.s;
  f.de = incidence - (q.sigma_prog + q.mu) * x.e;
  f.di_s = q.nu * q.sigma_prog * x.e - (q.mu + q.d_dis + q.gamma_rem) * x.i_s;
  f.di_a = (1.0 - q.nu) * q.sigma_prog * x.e - (q.mu + q.d_dis + q.delta_rem) * x.i_a;
  f.dr = q.gamma_rem * x.i_s + q.delta_rem * x.i_a - q.mu * x.r;
  f.db = q.omega_s * x.i_s + q.omega_a * x.i_a - q.eps_decay * x.b;
  return f;
}

DiffusionVector diffusion(const HerdState& x, const NoiseIntensities& n) {
  return {n.sig_s * x.s, n.sig_e * x.e, n.sig_is * x.i_s, n.sig_ia * x.i_a, 0.0, n.sig_b * x.b};
}

HerdState disease_free_equilibrium(const ModelParams& p) {
  require(p->mu > 0.0, "disease-free equilibrium requires mu > 0");
  return HerdState{.s = p->lambda_recruit / p->mu};
}

HerdState default_initial_state(const ModelParams& p) {
  const double s_star = disease_free_equilibrium(p).s;
  return HerdState{.s = std::max(0.0, s_star - 1.0), .e = 1.0};
}

double r0_closed_form(const ModelParams& p) {
  const auto& q = p.values();
  const double out_s = q.mu + q.d_dis + q.gamma_rem;
  const double out_a = q.mu + q.delta_rem + q.d_dis;
  const double out_e = q.sigma_prog + q.mu;
  const double decay = q.k_half * q.eps_decay;
  require(out_s > 0.0 && out_a > 0.0 && out_e > 0.0 && decay > 0.0,
          "R0 requires positive removal, progression and decay denominators");

  const double sym = q.nu / out_s;
  const double asym = (1.0 - q.nu) / out_a;
  const double direct = sym * q.beta_s + asym * q.beta_a;
  const double environmental = (q.beta_b / decay) * (sym * q.omega_s + asym * q.omega_a);
  return q.sigma_prog / out_e * (direct + environmental);
}

double r0_spectral(const ModelParams& p) { return spectral_radius_of_ngm(p, 1.0); }

double invasion_number(const ModelParams& p) {
  return spectral_radius_of_ngm(p, disease_free_equilibrium(p).s);
}

}  // namespace hpai
