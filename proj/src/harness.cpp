#include "exitwalk/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

#include "exitwalk/errors.hpp"
#include "exitwalk/quadrature.hpp"

namespace exitwalk {

unsigned worker_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EXITWALK_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<unsigned>(v);
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads) {
  if (threads == 0) threads = worker_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<ExitSample> sample_many(const Sampler& sampler, std::size_t n, std::uint64_t seed,
                                    unsigned threads) {
  if (n == 0) throw ConfigError("sample_many: n must be >= 1");
  return replicate<ExitSample>(sampler, n, seed, threads);
}

std::vector<double> exit_times(std::span<const ExitSample> samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.time);
  return out;
}

std::vector<CdfPoint> empirical_cdf(std::span<const double> samples,
                                    std::span<const double> grid) {
  if (samples.empty()) throw DomainError("empirical_cdf: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CdfPoint> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    out.push_back({t, static_cast<double>(count) / n});
  }
  return out;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_distance: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double worst = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return worst;
}

double ks_critical_value(std::size_t n1, std::size_t n2, double alpha) {
  if (n1 == 0 || n2 == 0 || !(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("ks_critical_value: requires nonempty samples and alpha in (0,1)");
  }
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  return c * std::sqrt((a + b) / (a * b));
}

std::vector<double> quantile_grid(std::span<const double> a, std::span<const double> b,
                                  std::size_t points) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  if (pooled.empty() || points == 0) throw DomainError("quantile_grid: empty input");
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> grid;
  grid.reserve(points);
  const double n = static_cast<double>(pooled.size());
  for (std::size_t k = 0; k < points; ++k) {
    const double q = (static_cast<double>(k) + 0.5) / static_cast<double>(points);
    const auto idx = std::min(pooled.size() - 1, static_cast<std::size_t>(q * n));
    grid.push_back(pooled[idx]);
  }
  return grid;
}

StepFit steps_vs_logeps(const ExitProblem& tmpl, std::span<const double> eps_list,
                        std::size_t n_per_eps, std::uint64_t seed, unsigned threads) {
  if (eps_list.empty()) throw ConfigError("steps_vs_logeps: empty eps list");
  for (std::size_t k = 1; k < eps_list.size(); ++k) {
    if (!(eps_list[k] < eps_list[k - 1])) {
      throw ConfigError("steps_vs_logeps: eps list must be strictly decreasing");
    }
  }
  StepFit fit;
  for (double eps : eps_list) {
    ExitProblem p = tmpl;
    p.eps = eps;
    p.validate();
    const auto samples = sample_many([&p](Rng& rng) { return run(p, rng, false).sample; },
                                     n_per_eps, seed, threads);
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t worst = 0;
    for (const auto& s : samples) {
      const double k = static_cast<double>(s.steps);
      sum += k;
      sum_sq += k * k;
      worst = std::max(worst, s.steps);
    }
    const double n = static_cast<double>(samples.size());
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
    fit.rows.push_back({eps, std::abs(std::log(eps)), mean, std::sqrt(var / n), worst});
  }

  for (std::size_t k = 1; k < fit.rows.size(); ++k) {
    if (fit.rows[k].mean_steps < fit.rows[k - 1].mean_steps) fit.nondecreasing = false;
  }

  const double n = static_cast<double>(fit.rows.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& r : fit.rows) {
    mx += r.abs_log_eps;
    my += r.mean_steps;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& r : fit.rows) {
    sxx += (r.abs_log_eps - mx) * (r.abs_log_eps - mx);
    sxy += (r.abs_log_eps - mx) * (r.mean_steps - my);
    syy += (r.mean_steps - my) * (r.mean_steps - my);
  }
  if (fit.rows.size() < 2 || sxx == 0.0) {
    fit.degenerate = true;
    fit.slope = std::numeric_limits<double>::quiet_NaN();
    fit.intercept = std::numeric_limits<double>::quiet_NaN();
    fit.r2 = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

BoundParams bound_params(const CoefficientSet& cs, std::span<const double> grid, double rho) {
  BoundParams out;
  out.sigma_floor = cs.sigma_floor();
  out.rho = rho;
  const auto beta = [&cs](double t) { return cs.beta(t); };
  const auto alpha = [&cs](double t) { return cs.alpha(t); };
  for (double t : grid) {
    const double hi = std::max(0.0, t);
    out.beta_bar.push_back(quad::sup_abs_on(beta, 0.0, hi));
    out.alpha_bar.push_back(quad::sup_abs_on(alpha, 0.0, hi));
  }
  return out;
}

SandwichReport cdf_sandwich_check(std::span<const double> woms_times,
                                  std::span<const double> oracle_times, double eps,
                                  const BoundParams& bounds, std::span<const double> grid,
                                  double ks_tol) {
  if (woms_times.empty() || oracle_times.empty()) {
    throw DomainError("cdf_sandwich_check: empty sample set");
  }
  if (bounds.beta_bar.size() != grid.size()) {
    throw DomainError("cdf_sandwich_check: bound parameters do not match the grid");
  }
  std::vector<double> shifted(grid.begin(), grid.end());
  for (double& t : shifted) t -= eps;
  const auto f_woms = empirical_cdf(woms_times, grid);
  const auto f_woms_shift = empirical_cdf(woms_times, shifted);
  const auto f_oracle = empirical_cdf(oracle_times, grid);

  SandwichReport rep;
  rep.eps = eps;
  rep.ks_tol = ks_tol;
  rep.rho = bounds.rho;
  rep.worst_upper_margin = std::numeric_limits<double>::infinity();
  rep.worst_lower_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    SandwichPoint pt;
    pt.t = grid[k];
    pt.f_woms = f_woms[k].value;
    pt.f_oracle = f_oracle[k].value;
    pt.f_woms_shifted = f_woms_shift[k].value;
    pt.prefactor =
        1.0 - bounds.rho * std::sqrt(eps) * (1.0 + bounds.beta_bar[k]) / bounds.sigma_floor;
    pt.upper_margin = pt.f_woms + ks_tol - pt.f_oracle;
    if (pt.prefactor <= 0.0) {
      pt.vacuous = true;
      pt.lower_margin = pt.f_oracle + ks_tol;
      ++rep.vacuous_points;
    } else {
      pt.lower_margin = pt.f_oracle + ks_tol - pt.prefactor * pt.f_woms_shifted;
    }
    if (pt.upper_margin < 0.0) ++rep.upper_violations;
    if (pt.lower_margin < 0.0) ++rep.lower_violations;
    rep.worst_upper_margin = std::min(rep.worst_upper_margin, pt.upper_margin);
    rep.worst_lower_margin = std::min(rep.worst_lower_margin, pt.lower_margin);
    rep.points.push_back(pt);
  }
  return rep;
}

std::vector<Bin> histogram(std::span<const double> samples, std::optional<double> bin_width) {
  if (samples.empty()) throw DomainError("histogram: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  const std::size_t n = sorted.size();

  double width = 0.0;
  if (bin_width) {
    if (!(*bin_width > 0.0)) throw DomainError("histogram: bin width must be positive");
    width = *bin_width;
  } else if (n > 1) {
    const double q1 = sorted[n / 4];
    const double q3 = sorted[(3 * n) / 4];
    width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(n));
  }
  if (!(width > 0.0) || hi == lo) return {{lo, hi, n}};

  constexpr std::size_t kMaxBins = 100000;
  const auto bins = std::min(kMaxBins, static_cast<std::size_t>(std::ceil((hi - lo) / width)));
  width = (hi - lo) / static_cast<double>(bins);
  std::vector<Bin> out(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    out[k].lo = lo + static_cast<double>(k) * width;
    out[k].hi = (k + 1 == bins) ? hi : lo + static_cast<double>(k + 1) * width;
  }
  for (double v : sorted) {
    auto k = static_cast<std::size_t>((v - lo) / width);
    out[std::min(k, bins - 1)].count++;
  }
  return out;
}

McReport summarize(std::span<const ExitSample> samples, const CoefficientSet& cs,
                   std::size_t cdf_points) {
  if (samples.empty()) throw DomainError("summarize: no samples");
  McReport rep;
  rep.n_samples = samples.size();
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  double steps = 0.0;
  std::size_t upper = 0;
  std::size_t censored = 0;
  for (const auto& s : samples) {
    sum += s.time;
    steps += static_cast<double>(s.steps);
    rep.max_steps = std::max(rep.max_steps, s.steps);
    if (s.side == Side::upper) ++upper;
    if (s.censored) ++censored;
  }
  rep.mean_time = sum / n;
  double ss = 0.0;
  for (const auto& s : samples) ss += (s.time - rep.mean_time) * (s.time - rep.mean_time);
  rep.var_time = n > 1 ? ss / (n - 1) : 0.0;
  rep.se_time = std::sqrt(rep.var_time / n);
  rep.frac_upper = static_cast<double>(upper) / n;
  rep.frac_lower = 1.0 - rep.frac_upper;
  rep.censored_fraction = static_cast<double>(censored) / n;
  rep.mean_steps = steps / n;

  const auto times = exit_times(samples);
  const auto grid = quantile_grid(times, {}, cdf_points);
  rep.cdf = empirical_cdf(times, grid);

  const double horizon = *std::max_element(times.begin(), times.end());
  rep.alpha_bar = quad::sup_abs_on([&cs](double t) { return cs.alpha(t); }, 0.0, horizon);
  rep.beta_bar = quad::sup_abs_on([&cs](double t) { return cs.beta(t); }, 0.0, horizon);
  rep.sigma_floor = cs.sigma_floor();
  return rep;
}

}  // namespace exitwalk
