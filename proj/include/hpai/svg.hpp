#pragma once

#include <iosfwd>

#include "hpai/ensemble.hpp"
#include "hpai/integrate.hpp"
#include "hpai/sensitivity.hpp"

namespace hpai {

// One polyline panel per compartment.
void write_trajectory_svg(std::ostream& os, const Trajectory& traj);

// Mean line with the 2.5-97.5% band, one panel per compartment.
void write_ensemble_svg(std::ostream& os, const EnsembleSummary& summary);

// Horizontal PRCC bars; significant parameters get a marker.
void write_prcc_svg(std::ostream& os, const SensitivityReport& report);

}  // namespace hpai
