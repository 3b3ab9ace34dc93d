#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hpai/error.hpp"
#include "hpai/integrate.hpp"
#include "hpai/model.hpp"

namespace hpai {

inline constexpr double kDefaultExtinctionThreshold = 1.0;

struct EnsembleOptions {
  std::size_t threads = 0;  // 0: std::thread::hardware_concurrency()
  double extinction_threshold = kDefaultExtinctionThreshold;
  std::optional<double> extinction_by_time;  // default: t_end
  // Called once per finished path, possibly from a worker thread.
  std::function<void(std::size_t, const Trajectory&)> on_path;
};

// Integrator failure on one ensemble member.
class PathError : public NumericError {
 public:
  PathError(std::size_t path_index, const std::string& what);
  std::size_t path_index() const { return path_index_; }

 private:
  std::size_t path_index_;
};

/// Every recorded state of every path, stored path-major.
struct EnsembleSamples {
  std::vector<double> times;
  std::size_t n_paths = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> values;  // [path][time][compartment]

  double at(std::size_t path, std::size_t time, std::size_t compartment) const {
    return values[(path * times.size() + time) * kCompartments + compartment];
  }
};

struct CompartmentStats {
  std::vector<double> mean;
  std::vector<double> std;  // sample standard deviation (n - 1); 0 for one path
  std::vector<double> q025;
  std::vector<double> q50;
  std::vector<double> q975;
};

struct EnsembleSummary {
  std::vector<double> times;
  std::array<CompartmentStats, kCompartments> stats;
  std::size_t n_paths = 0;
  std::uint64_t master_seed = 0;
  double extinct_fraction = 0.0;
};

// Path i is driven by NoiseStream{master_seed, i}. Results do not depend on
// the thread count.
EnsembleSamples sample_ensemble(const ModelParams& p, const NoiseIntensities& n,
                                const HerdState& init, const SimConfig& cfg,
                                std::size_t n_paths, std::uint64_t master_seed,
                                const EnsembleOptions& opts = {});

EnsembleSummary summarize(const EnsembleSamples& samples,
                          double extinction_threshold = kDefaultExtinctionThreshold,
                          std::optional<double> extinction_by_time = std::nullopt);

EnsembleSummary run_ensemble(const ModelParams& p, const NoiseIntensities& n,
                             const HerdState& init, const SimConfig& cfg, std::size_t n_paths,
                             std::uint64_t master_seed, const EnsembleOptions& opts = {});

// Share of paths whose infected load E + I_s + I_a stays below `threshold`
// (or is exactly zero) at every recorded time >= by_time.
double extinction_fraction(const EnsembleSamples& samples, double threshold,
                           std::optional<double> by_time = std::nullopt);

// Quantile by linear interpolation between order statistics of `sorted`.
double quantile_sorted(std::span<const double> sorted, double q);

// Pairwise (cascade) summation; result depends only on the element order.
double pairwise_sum(std::span<const double> xs);

// Mean over recorded times of the cross-path standard deviation.
double time_averaged_std(const EnsembleSummary& summary, std::size_t compartment);

}  // namespace hpai
