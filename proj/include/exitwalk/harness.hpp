#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "exitwalk/coeffs.hpp"
#include "exitwalk/rng.hpp"
#include "exitwalk/woms.hpp"

namespace exitwalk {

/// Worker count for replica fan-out: EXITWALK_THREADS if set (>= 1),
/// otherwise the hardware concurrency.
unsigned worker_threads();

/// Calls body(i) for i in [0, n) on up to `threads` workers (0 = default).
/// The first exception thrown by any call is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

/// n replicas of `sampler`, replica i driven by Rng::for_replica(seed, i).
/// The result does not depend on the number of workers or their schedule.
template <class R>
std::vector<R> replicate(const std::function<R(Rng&)>& sampler, std::size_t n,
                         std::uint64_t seed, unsigned threads = 0) {
  std::vector<R> out(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        Rng rng = Rng::for_replica(seed, i);
        out[i] = sampler(rng);
      },
      threads);
  return out;
}

using Sampler = std::function<ExitSample(Rng&)>;

std::vector<ExitSample> sample_many(const Sampler& sampler, std::size_t n, std::uint64_t seed,
                                    unsigned threads = 0);

std::vector<double> exit_times(std::span<const ExitSample> samples);

struct CdfPoint {
  double t = 0.0;
  double value = 0.0;
};

/// Fraction of samples <= t at each grid point.
std::vector<CdfPoint> empirical_cdf(std::span<const double> samples, std::span<const double> grid);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample KS critical value at significance `alpha`.
double ks_critical_value(std::size_t n1, std::size_t n2, double alpha = 0.001);

/// `points` grid values at the pooled-sample quantiles (i + 1/2) / points.
std::vector<double> quantile_grid(std::span<const double> a, std::span<const double> b,
                                  std::size_t points = 512);

struct StepRow {
  double eps = 0.0;
  double abs_log_eps = 0.0;
  double mean_steps = 0.0;
  double se_steps = 0.0;
  std::uint64_t max_steps = 0;
};

struct StepFit {
  std::vector<StepRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
  /// NaN when fewer than two distinct eps values make the fit degenerate.
  double r2 = 0.0;
  bool degenerate = false;
  /// Mean step counts nondecreasing as eps decreases.
  bool nondecreasing = true;
};

/// Mean step counts of `tmpl` for each eps (strictly decreasing list) and a
/// least-squares affine fit of the means in |log eps|.
StepFit steps_vs_logeps(const ExitProblem& tmpl, std::span<const double> eps_list,
                        std::size_t n_per_eps, std::uint64_t seed, unsigned threads = 0);

struct BoundParams {
  /// sup |beta| on [0, t] for each grid point.
  std::vector<double> beta_bar;
  /// sup |alpha| on [0, t] for each grid point.
  std::vector<double> alpha_bar;
  double sigma_floor = 1.0;
  double rho = 1.05;
};

BoundParams bound_params(const CoefficientSet& cs, std::span<const double> grid,
                         double rho = 1.05);

struct SandwichPoint {
  double t = 0.0;
  double f_woms = 0.0;
  double f_oracle = 0.0;
  double f_woms_shifted = 0.0;
  double prefactor = 0.0;
  double upper_margin = 0.0;
  double lower_margin = 0.0;
  bool vacuous = false;
};

struct SandwichReport {
  double eps = 0.0;
  double ks_tol = 0.0;
  double rho = 1.05;
  std::size_t upper_violations = 0;
  std::size_t lower_violations = 0;
  double worst_upper_margin = 0.0;
  double worst_lower_margin = 0.0;
  std::size_t vacuous_points = 0;
  std::vector<SandwichPoint> points;

  bool ok() const { return upper_violations == 0 && lower_violations == 0; }
};

/// Empirical check of
///   (i)  F_oracle(t) <= F_woms(t) + ks_tol
///   (ii) (1 - rho sqrt(eps) (1 + beta_bar_t) / sigma_floor) F_woms(t - eps)
///            <= F_oracle(t) + ks_tol
/// on every grid point. Check (ii) holds trivially (and is flagged vacuous)
/// where the prefactor is not positive.
SandwichReport cdf_sandwich_check(std::span<const double> woms_times,
                                  std::span<const double> oracle_times, double eps,
                                  const BoundParams& bounds, std::span<const double> grid,
                                  double ks_tol);

struct Bin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

/// Histogram with the given bin width, or the Freedman-Diaconis width when
/// bin_width is absent.
std::vector<Bin> histogram(std::span<const double> samples,
                           std::optional<double> bin_width = std::nullopt);

struct McReport {
  std::size_t n_samples = 0;
  double mean_time = 0.0;
  double var_time = 0.0;
  double se_time = 0.0;
  double frac_upper = 0.0;
  double frac_lower = 0.0;
  double censored_fraction = 0.0;
  double mean_steps = 0.0;
  std::uint64_t max_steps = 0;
  std::vector<CdfPoint> cdf;
  std::optional<double> ks_vs_oracle;
  std::vector<StepRow> per_eps;
  double alpha_bar = 0.0;
  double beta_bar = 0.0;
  double sigma_floor = 0.0;
};

/// Aggregate statistics of a sample list. Bound parameters are evaluated on
/// [0, max exit time]; the CDF is tabulated on `cdf_points` sample quantiles.
McReport summarize(std::span<const ExitSample> samples, const CoefficientSet& cs,
                   std::size_t cdf_points = 512);

}  // namespace exitwalk
