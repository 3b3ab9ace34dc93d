#include "hpai/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace hpai {
namespace {

std::size_t resolve_threads(std::size_t requested, std::size_t work) {
  std::size_t t = requested != 0 ? requested : std::thread::hardware_concurrency();
  return std::clamp<std::size_t>(t, 1, std::max<std::size_t>(work, 1));
}

double infected_load(const EnsembleSamples& s, std::size_t path, std::size_t t) {
  return s.at(path, t, 1) + s.at(path, t, 2) + s.at(path, t, 3);
}

}  // namespace

PathError::PathError(std::size_t path_index, const std::string& what)
    : NumericError("path " + std::to_string(path_index) + ": " + what), path_index_(path_index) {}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ValidationError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

EnsembleSamples sample_ensemble(const ModelParams& p, const NoiseIntensities& n,
                                const HerdState& init, const SimConfig& cfg,
                                std::size_t n_paths, std::uint64_t master_seed,
                                const EnsembleOptions& opts) {
  if (n_paths < 1) throw ValidationError("ensemble needs at least one path");
  init.validate();
  n.validate();
  const std::size_t steps = cfg.step_count();

  EnsembleSamples out;
  out.n_paths = n_paths;
  out.master_seed = master_seed;
  for (std::size_t k = 0; k <= steps; ++k) {
    if (k % cfg.record_stride == 0 || k == steps) out.times.push_back(static_cast<double>(k) * cfg.dt);
  }
  const std::size_t per_path = out.times.size() * kCompartments;
  out.values.assign(n_paths * per_path, 0.0);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t failed_path = n_paths;
  std::string failure;

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n_paths; i = next.fetch_add(1)) {
      try {
        const Trajectory traj = integrate_sde(p, n, init, cfg, NoiseStream{master_seed, i});
        double* dst = out.values.data() + i * per_path;
        for (const auto& x : traj.states) {
          for (std::size_t c = 0; c < kCompartments; ++c) *dst++ = x[c];
        }
        if (opts.on_path) opts.on_path(i, traj);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        // Report the lowest failing index so the error is scheduling-independent.
        if (i < failed_path) {
          failed_path = i;
          failure = e.what();
        }
      }
    }
  };

  const std::size_t threads = resolve_threads(opts.threads, n_paths);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failed_path < n_paths) throw PathError(failed_path, failure);
  return out;
}

double extinction_fraction(const EnsembleSamples& samples, double threshold,
                           std::optional<double> by_time) {
  if (!(threshold >= 0.0)) throw ValidationError("extinction threshold must be >= 0");
  if (samples.n_paths == 0 || samples.times.empty()) return 0.0;
  const double from = by_time.value_or(samples.times.back());
  if (from > samples.times.back()) throw ValidationError("extinction by_time exceeds t_end");

  const auto first = static_cast<std::size_t>(
      std::lower_bound(samples.times.begin(), samples.times.end(), from) - samples.times.begin());
  std::size_t extinct = 0;
  for (std::size_t path = 0; path < samples.n_paths; ++path) {
    bool gone = true;
    for (std::size_t t = first; t < samples.times.size() && gone; ++t) {
      const double load = infected_load(samples, path, t);
      gone = load < threshold || load == 0.0;
    }
    extinct += gone ? 1 : 0;
  }
  return static_cast<double>(extinct) / static_cast<double>(samples.n_paths);
}

EnsembleSummary summarize(const EnsembleSamples& samples, double extinction_threshold,
                          std::optional<double> extinction_by_time) {
  EnsembleSummary sum;
  sum.times = samples.times;
  sum.n_paths = samples.n_paths;
  sum.master_seed = samples.master_seed;

  const std::size_t n_times = samples.times.size();
  const auto n = static_cast<double>(samples.n_paths);
  std::vector<double> column(samples.n_paths);
  for (std::size_t c = 0; c < kCompartments; ++c) {
    auto& st = sum.stats[c];
    for (auto* v : {&st.mean, &st.std, &st.q025, &st.q50, &st.q975}) v->resize(n_times);
    for (std::size_t t = 0; t < n_times; ++t) {
      for (std::size_t path = 0; path < samples.n_paths; ++path) column[path] = samples.at(path, t, c);
      const double mean = pairwise_sum(column) / n;
      double var = 0.0;
      if (samples.n_paths > 1) {
        std::vector<double> sq(column.size());
        for (std::size_t i = 0; i < column.size(); ++i) sq[i] = (column[i] - mean) * (column[i] - mean);
        var = pairwise_sum(sq) / (n - 1.0);
      }
      std::sort(column.begin(), column.end());
      st.mean[t] = mean;
      st.std[t] = std::sqrt(var);
      st.q025[t] = quantile_sorted(column, 0.025);
      st.q50[t] = quantile_sorted(column, 0.5);
      st.q975[t] = quantile_sorted(column, 0.975);
    }
  }
  sum.extinct_fraction = extinction_fraction(samples, extinction_threshold, extinction_by_time);
  return sum;
}

EnsembleSummary run_ensemble(const ModelParams& p, const NoiseIntensities& n,
                             const HerdState& init, const SimConfig& cfg, std::size_t n_paths,
                             std::uint64_t master_seed, const EnsembleOptions& opts) {
  const auto samples = sample_ensemble(p, n, init, cfg, n_paths, master_seed, opts);
  return summarize(samples, opts.extinction_threshold, opts.extinction_by_time);
}

double time_averaged_std(const EnsembleSummary& summary, std::size_t compartment) {
  const auto& sd = summary.stats.at(compartment).std;
  if (sd.empty()) return 0.0;
  return pairwise_sum(sd) / static_cast<double>(sd.size());
}

}  // namespace hpai
