#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hpai/integrate.hpp"
#include "hpai/model.hpp"

namespace hpai {

struct ParamRange {
  Param param;
  double low = 0.0;
  double high = 0.0;  // low == high freezes the parameter
};

struct ParamRanges {
  std::vector<ParamRange> entries;

  // Throws ValidationError for reversed bounds, duplicates, or bounds outside
  // the parameter's legal domain.
  void validate() const;

  // baseline * (1 -/+ rel) for each listed parameter, clamped to legal bounds.
  static ParamRanges around(const ModelParams& base, double rel = 0.5);
  static ParamRanges around(const ModelParams& base, double rel, std::span<const Param> params);
};

// The twelve rate constants that enter R0 apart from K.
std::vector<Param> default_sensitivity_params();

inline constexpr double kDefaultSignificance = 0.05;
inline constexpr std::size_t kDefaultLhsSamples = 1000;

/// n x k Latin hypercube on the given ranges: column j holds exactly one draw
/// from each of the n equal-width strata of [low_j, high_j], in an independent
/// random order per column.
Eigen::MatrixXd lhs_sample(const ParamRanges& ranges, std::size_t n, std::uint64_t seed);

enum class PrccStatus {
  ok,
  constant,   // input column has a single value; no coefficient defined
  collinear,  // input is (numerically) a linear combination of the others
};

struct PrccEntry {
  std::string name;
  double prcc = 0.0;  // NaN unless status == ok
  double p_value = 1.0;
  bool significant = false;
  PrccStatus status = PrccStatus::ok;
};

struct SensitivityReport {
  std::vector<PrccEntry> entries;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double alpha = kDefaultSignificance;

  const PrccEntry& at(std::string_view name) const;
};

// Ranks 1..n with ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> xs);

/// Partial rank correlation of every column of `samples` with `outputs`,
/// controlling for the remaining non-constant columns, with two-sided t-test
/// p-values on n - 2 - (k - 1) degrees of freedom.
SensitivityReport prcc(const Eigen::MatrixXd& samples, std::span<const double> outputs,
                       const std::vector<std::string>& names, double alpha = kDefaultSignificance);

// Applies one LHS row to `base`.
ModelParams apply_row(const ModelParams& base, const ParamRanges& ranges,
                      const Eigen::MatrixXd& samples, Eigen::Index row);

SensitivityReport sensitivity_of_r0(const ModelParams& base, const ParamRanges& ranges,
                                    std::size_t n, std::uint64_t seed);

// Output metric: peak I_s of the deterministic trajectory from `init`.
SensitivityReport sensitivity_of_peak(const ModelParams& base, const HerdState& init,
                                      const SimConfig& cfg, const ParamRanges& ranges,
                                      std::size_t n, std::uint64_t seed, std::size_t threads = 0);

}  // namespace hpai
