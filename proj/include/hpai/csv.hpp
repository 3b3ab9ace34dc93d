#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hpai/ensemble.hpp"
#include "hpai/integrate.hpp"
#include "hpai/sensitivity.hpp"

namespace hpai {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);
// Whole-string parse; nullopt on any trailing or missing characters.
std::optional<double> parse_double(std::string_view s);

inline constexpr std::string_view kTrajectoryHeader = "t,S,E,I_s,I_a,R,B";
inline constexpr std::string_view kEnsembleHeader = "t,compartment,mean,std,q025,q50,q975";
inline constexpr std::string_view kSensitivityHeader = "parameter,prcc,p_value,significant";

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& is);

void write_ensemble_csv(std::ostream& os, const EnsembleSummary& summary);

struct EnsembleRow {
  double t = 0.0;
  std::string compartment;
  double mean = 0.0;
  double std = 0.0;
  double q025 = 0.0;
  double q50 = 0.0;
  double q975 = 0.0;
};
std::vector<EnsembleRow> read_ensemble_csv(std::istream& is);

void write_sensitivity_csv(std::ostream& os, const SensitivityReport& report);
std::vector<PrccEntry> read_sensitivity_csv(std::istream& is);

}  // namespace hpai
