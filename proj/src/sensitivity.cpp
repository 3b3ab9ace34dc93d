#include "hpai/sensitivity.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "hpai/error.hpp"
#include "hpai/rng.hpp"

namespace hpai {
namespace {

// Residual norms below this fraction of the centred norm count as zero.
constexpr double kCollinearTol = 1e-9;

bool legal_value(Param p, double x) {
  if (!std::isfinite(x) || x < 0.0) return false;
  if (p == Param::nu && x > 1.0) return false;
  if ((p == Param::mu || p == Param::k || p == Param::epsilon) && x <= 0.0) return false;
  return true;
}

Eigen::VectorXd residual(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  if (design.cols() == 0) return y;
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  return y - design * qr.solve(y);
}

Eigen::VectorXd centred(const Eigen::VectorXd& v) {
  return v.array() - v.mean();
}

}  // namespace

void ParamRanges::validate() const {
  if (entries.empty()) throw ValidationError("parameter ranges are empty");
  std::array<bool, kParamCount> seen{};
  for (const auto& r : entries) {
    const auto name = std::string(param_name(r.param));
    auto& flag = seen[static_cast<std::size_t>(r.param)];
    if (flag) throw ValidationError("duplicate range for " + name);
    flag = true;
    if (!(r.low <= r.high)) throw ValidationError("range for " + name + " has low > high");
    if (!legal_value(r.param, r.low) || !legal_value(r.param, r.high)) {
      throw ValidationError("range for " + name + " leaves the parameter's legal domain");
    }
  }
}

ParamRanges ParamRanges::around(const ModelParams& base, double rel) {
  const auto params = default_sensitivity_params();
  return around(base, rel, params);
}

ParamRanges ParamRanges::around(const ModelParams& base, double rel, std::span<const Param> params) {
  if (!(rel >= 0.0 && rel < 1.0)) throw ValidationError("relative range width must be in [0, 1)");
  ParamRanges out;
  for (Param p : params) {
    const double x = base[p];
    double lo = x * (1.0 - rel);
    double hi = x * (1.0 + rel);
    if (p == Param::nu) {
      lo = std::clamp(lo, 0.0, 1.0);
      hi = std::clamp(hi, 0.0, 1.0);
    }
    out.entries.push_back({p, lo, hi});
  }
  out.validate();
  return out;
}

std::vector<Param> default_sensitivity_params() {
  return {Param::mu,    Param::beta_s, Param::beta_a, Param::beta_b,  Param::sigma,   Param::nu,
          Param::gamma, Param::delta,  Param::d,      Param::omega_s, Param::omega_a, Param::epsilon};
}

Eigen::MatrixXd lhs_sample(const ParamRanges& ranges, std::size_t n, std::uint64_t seed) {
  ranges.validate();
  if (n < 2) throw ValidationError("Latin hypercube needs at least 2 samples");
  const auto k = static_cast<Eigen::Index>(ranges.entries.size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), k);
  SampleRng rng(seed);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& r = ranges.entries[static_cast<std::size_t>(j)];
    const auto strata = rng.permutation(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (static_cast<double>(strata[i]) + rng.uniform()) * inv_n;
      m(static_cast<Eigen::Index>(i), j) = r.low + (r.high - r.low) * u;
    }
  }
  return m;
}

const PrccEntry& SensitivityReport::at(std::string_view name) const {
  for (const auto& e : entries) {
    if (e.name == name) return e;
  }
  throw ValidationError("no sensitivity entry named " + std::string(name));
}

std::vector<double> average_ranks(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && xs[order[j]] == xs[order[i]]) ++j;
    // Positions i..j-1 share ranks i+1..j.
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = avg;
    i = j;
  }
  return ranks;
}

SensitivityReport prcc(const Eigen::MatrixXd& samples, std::span<const double> outputs,
                       const std::vector<std::string>& names, double alpha) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index k = samples.cols();
  if (static_cast<Eigen::Index>(outputs.size()) != n) {
    throw ValidationError("PRCC: output count does not match sample rows");
  }
  if (static_cast<Eigen::Index>(names.size()) != k) {
    throw ValidationError("PRCC: name count does not match sample columns");
  }
  for (double y : outputs) {
    if (!std::isfinite(y)) throw ValidationError("PRCC: outputs must be finite");
  }

  Eigen::MatrixXd ranks(n, k);
  std::vector<bool> active(static_cast<std::size_t>(k));
  std::vector<double> col(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = samples(i, j);
    const auto r = average_ranks(col);
    ranks.col(j) = Eigen::Map<const Eigen::VectorXd>(r.data(), n);
    active[static_cast<std::size_t>(j)] = samples.col(j).maxCoeff() > samples.col(j).minCoeff();
  }
  const auto ry = average_ranks(outputs);
  const Eigen::VectorXd y_ranks = Eigen::Map<const Eigen::VectorXd>(ry.data(), n);

  const auto k_active = static_cast<Eigen::Index>(std::count(active.begin(), active.end(), true));
  const double dof = static_cast<double>(n - 2 - (k_active - 1));
  if (k_active > 0 && !(n > k_active + 2)) {
    throw ValidationError("PRCC needs more samples than active parameters + 2");
  }

  SensitivityReport report;
  report.n_samples = static_cast<std::size_t>(n);
  report.alpha = alpha;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index j = 0; j < k; ++j) {
    PrccEntry e;
    e.name = names[static_cast<std::size_t>(j)];
    if (!active[static_cast<std::size_t>(j)]) {
      e.status = PrccStatus::constant;
      e.prcc = nan;
      report.entries.push_back(e);
      continue;
    }
    Eigen::MatrixXd design(n, k_active);
    design.col(0).setOnes();
    Eigen::Index c = 1;
    for (Eigen::Index o = 0; o < k; ++o) {
      if (o != j && active[static_cast<std::size_t>(o)]) design.col(c++) = ranks.col(o);
    }
    const Eigen::VectorXd rx = residual(design, ranks.col(j));
    const Eigen::VectorXd ry_res = residual(design, y_ranks);
    const double nx = rx.norm();
    const double ny = ry_res.norm();
    if (nx <= kCollinearTol * centred(ranks.col(j)).norm()) {
      e.status = PrccStatus::collinear;
      e.prcc = nan;
      report.entries.push_back(e);
      continue;
    }
    if (ny <= kCollinearTol * std::max(centred(y_ranks).norm(), 1.0)) {
      // Output carries no variation beyond the other inputs: zero partial correlation.
      e.prcc = 0.0;
      e.p_value = 1.0;
      e.significant = false;
      report.entries.push_back(e);
      continue;
    }
    const double r = std::clamp(rx.dot(ry_res) / (nx * ny), -1.0, 1.0);
    e.prcc = r;
    const double one_minus = 1.0 - r * r;
    if (one_minus <= 0.0) {
      e.p_value = 0.0;
    } else {
      const double t = r * std::sqrt(dof / one_minus);
      const boost::math::students_t dist(dof);
      e.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
    }
    e.significant = e.p_value < alpha;
    report.entries.push_back(e);
  }
  return report;
}

ModelParams apply_row(const ModelParams& base, const ParamRanges& ranges,
                      const Eigen::MatrixXd& samples, Eigen::Index row) {
  ParamValues v = base.values();
  for (std::size_t j = 0; j < ranges.entries.size(); ++j) {
    v[ranges.entries[j].param] = samples(row, static_cast<Eigen::Index>(j));
  }
  return ModelParams(v);
}

namespace {

std::vector<std::string> range_names(const ParamRanges& ranges) {
  std::vector<std::string> names;
  for (const auto& r : ranges.entries) names.emplace_back(param_name(r.param));
  return names;
}

}  // namespace

SensitivityReport sensitivity_of_r0(const ModelParams& base, const ParamRanges& ranges,
                                    std::size_t n, std::uint64_t seed) {
  const Eigen::MatrixXd samples = lhs_sample(ranges, n, seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = r0_closed_form(apply_row(base, ranges, samples, static_cast<Eigen::Index>(i)));
  }
  auto report = prcc(samples, out, range_names(ranges));
  report.seed = seed;
  return report;
}

SensitivityReport sensitivity_of_peak(const ModelParams& base, const HerdState& init,
                                      const SimConfig& cfg, const ParamRanges& ranges,
                                      std::size_t n, std::uint64_t seed, std::size_t threads) {
  const Eigen::MatrixXd samples = lhs_sample(ranges, n, seed);
  std::vector<double> out(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n && !failed; i = next.fetch_add(1)) {
      try {
        const auto p = apply_row(base, ranges, samples, static_cast<Eigen::Index>(i));
        out[i] = peak_of(integrate_ode(p, init, cfg), 2).value;
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  std::size_t t = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  t = std::min(t, n);
  if (t <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < t; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  auto report = prcc(samples, out, range_names(ranges));
  report.seed = seed;
  return report;
}

}  // namespace hpai
