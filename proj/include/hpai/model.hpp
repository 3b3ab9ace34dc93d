#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace hpai {

// Epidemiological rate constants, in the order used for config keys and
// sensitivity reports.
enum class Param : std::size_t {
  lambda,
  mu,
  beta_s,
  beta_a,
  beta_b,
  k,
  sigma,
  nu,
  gamma,
  delta,
  d,
  omega_s,
  omega_a,
  epsilon,
};
inline constexpr std::size_t kParamCount = 14;

// Lowercase config key for a parameter ("beta_a", "epsilon", ...).
std::string_view param_name(Param p);
std::optional<Param> param_from_name(std::string_view name);

/// Raw, unchecked rate constants. Defaults are the baseline herd values.
struct ParamValues {
  double lambda_recruit = 30.0;  // cattle/day
  double mu = 0.01;              // natural mortality, 1/day
  double beta_s = 0.005;         // symptomatic contact transmission, 1/day
  double beta_a = 0.004;         // asymptomatic contact transmission, 1/day
  double beta_b = 0.002;         // environmental transmission ceiling, 1/day
  double k_half = 500.0;         // half-saturation virus load
  double sigma_prog = 0.2;       // E -> infectious progression, 1/day
  double nu = 0.5;               // symptomatic fraction
  double gamma_rem = 0.1;        // symptomatic removal, 1/day
  double delta_rem = 0.05;       // asymptomatic removal, 1/day
  double d_dis = 0.01;           // disease mortality (both infectious classes)
  double omega_s = 0.5;          // shedding by symptomatic cattle
  double omega_a = 0.4;          // shedding by asymptomatic cattle
  double eps_decay = 0.1;        // environmental decay, 1/day

  double& operator[](Param p);
  double operator[](Param p) const;
};

/// Validated rate constants. Construction throws ValidationError unless every
/// value is finite and nonnegative, nu lies in [0, 1], and mu, k and epsilon
/// are strictly positive.
class ModelParams {
 public:
  ModelParams() = default;
  explicit ModelParams(const ParamValues& values);

  const ParamValues& values() const { return values_; }
  const ParamValues* operator->() const { return &values_; }
  double operator[](Param p) const { return values_[p]; }

  // Copy with one value replaced; revalidates.
  ModelParams with(Param p, double value) const;

 private:
  ParamValues values_;
};

/// Per-compartment multiplicative noise intensities (1/sqrt(day)). R carries
/// no noise. Defaults are the baseline 0.05 on every noisy class.
struct NoiseIntensities {
  double sig_s = 0.05;
  double sig_e = 0.05;
  double sig_is = 0.05;
  double sig_ia = 0.05;
  double sig_b = 0.05;

  static NoiseIntensities none() { return {0.0, 0.0, 0.0, 0.0, 0.0}; }
  static NoiseIntensities uniform(double s) { return {s, s, s, s, s}; }

  bool is_zero() const;
  void validate() const;
};

inline constexpr std::size_t kCompartments = 6;
inline constexpr std::array<std::string_view, kCompartments> kCompartmentNames{
    "S", "E", "I_s", "I_a", "R", "B"};

/// One point of the herd state space. Host classes are head counts; b is the
/// environmental virus load.
struct HerdState {
  double s = 0.0;
  double e = 0.0;
  double i_s = 0.0;
  double i_a = 0.0;
  double r = 0.0;
  double b = 0.0;

  double& operator[](std::size_t i);
  double operator[](std::size_t i) const;

  // Throws ValidationError when any component is negative or non-finite.
  void validate() const;

  friend bool operator==(const HerdState&, const HerdState&) = default;
};

/// Right-hand side of the deterministic system at one state (per day).
struct DriftVector {
  double ds = 0.0;
  double de = 0.0;
  double di_s = 0.0;
  double di_a = 0.0;
  double dr = 0.0;
  double db = 0.0;

  double operator[](std::size_t i) const;
  double max_norm() const;
};

using DiffusionVector = std::array<double, kCompartments>;

// N = S + E + I_s + I_a + R; the environmental load is not part of the herd.
double total_population(const HerdState& x);

// Per-susceptible infection pressure. The frequency-dependent terms are taken
// as zero when N = 0.
double force_of_infection(const HerdState& x, const ModelParams& p);

DriftVector drift(const HerdState& x, const ModelParams& p);

// (sig_s S, sig_e E, sig_is I_s, sig_ia I_a, 0, sig_b B).
DiffusionVector diffusion(const HerdState& x, const NoiseIntensities& n);

// (Lambda/mu, 0, 0, 0, 0, 0).
HerdState disease_free_equilibrium(const ModelParams& p);

// One exposed animal in an otherwise disease-free herd.
HerdState default_initial_state(const ModelParams& p);

/// Basic reproduction number from the explicit next-generation formula.
double r0_closed_form(const ModelParams& p);

/// Basic reproduction number as the spectral radius of F V^-1, with F and V
/// assembled in (E, I_s, I_a, B) order and the environmental entry of F taken
/// as beta_B / K (the normalisation under which the closed form holds).
/// Independent of r0_closed_form; used to cross-check it.
double r0_spectral(const ModelParams& p);

/// Spectral radius of F V^-1 with the unnormalised environmental entry
/// beta_B S*/K, S* = Lambda/mu, i.e. the linearisation of the vector field at
/// the disease-free state. This is the quantity whose crossing of 1 decides
/// whether an endemic root exists and whether introductions grow.
double invasion_number(const ModelParams& p);

}  // namespace hpai
