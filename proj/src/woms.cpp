#include "exitwalk/woms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "exitwalk/errors.hpp"

namespace exitwalk {

namespace {

const double kInvSqrtE = 1.0 / std::sqrt(std::numbers::e);

// Keeps rho^{-1}(d^2 + rho(t0)) inside the spheroid support under rounding.
constexpr double kScaleShrink = 1.0 - 1e-12;

bool in_interior(const ExitProblem& p, double x) { return x < p.b - p.eps && x > p.a + p.eps; }

Side side_of(const ExitProblem& p, double x) {
  if (x >= p.b - p.eps) return Side::upper;
  if (x <= p.a + p.eps) return Side::lower;
  return (x - p.a) >= (p.b - x) ? Side::upper : Side::lower;
}

}  // namespace

void ExitProblem::validate() const {
  std::ostringstream os;
  if (!(a + eps < b - eps) || !(eps > 0.0) || !(a < b)) {
    os << "interval requires a < a+eps < b-eps < b (a=" << a << ", b=" << b << ", eps=" << eps
       << ")";
  } else if (!(gamma_shell > 0.0 && gamma_shell < 1.0)) {
    os << "gamma must lie in (0, 1), got " << gamma_shell;
  } else if (!(m > 0.0) || !std::isfinite(m)) {
    os << "m must be positive, got " << m;
  } else if (!(t0 >= 0.0)) {
    os << "t0 must be >= 0, got " << t0;
  } else if (!(x0 >= a && x0 <= b)) {
    os << "x0 = " << x0 << " outside [" << a << ", " << b << "]";
  } else if (max_steps == 0) {
    os << "max_steps must be positive";
  } else {
    return;
  }
  throw ConfigError(os.str());
}

Bounds shrunken_bounds(const ExitProblem& p, double x) {
  return {p.a + p.gamma_shell * (x - p.a), p.b - p.gamma_shell * (p.b - x)};
}

double delta_m(const ExitProblem& p, double t0, double x0) {
  const CoefficientSet& cs = p.coeffs;
  if (cs.delta_bound()) return cs.delta_bound()(t0, x0, p.m, p.a, p.b);

  const double t1 = t0 + p.m;
  const double abs_alpha =
      quad::integrate([&cs](double s) { return std::abs(cs.alpha(s)); }, t0, t1, cs.tolerance());
  const double drift_ratio = quad::integrate(
      [&cs, x0](double s) {
        const double num = cs.beta(s) + x0 * cs.alpha(s);
        const double sg = cs.sigma(s);
        return num * num / (sg * sg);
      },
      t0, t1, cs.tolerance());
  return std::exp(-cs.theta(t0)) * std::exp(abs_alpha) * (kInvSqrtE + std::sqrt(drift_ratio));
}

double spheroid_scale(const ExitProblem& p, double t0, double x0) {
  if (!(x0 > p.a && x0 < p.b)) {
    std::ostringstream os;
    os << "spheroid_scale: x0 = " << x0 << " not inside (" << p.a << ", " << p.b << ")";
    throw DomainError(os.str());
  }
  const double delta = delta_m(p, t0, x0);
  const Bounds shrunk = shrunken_bounds(p, x0);
  const double drho = p.coeffs.rho_increment(t0, t0 + p.m);
  // The side closer to x0 is the binding one.
  const double room = (p.b - x0 <= x0 - p.a) ? shrunk.upper - x0 : x0 - shrunk.lower;
  const double kappa = delta * std::sqrt(drho) / room;
  return std::min(1.0, kappa) / delta * room * kScaleShrink;
}

double spheroid_lifetime(const ExitProblem& p, double t0, double d) {
  return p.coeffs.rho_advance(t0, d * d, p.m) - t0;
}

Bounds psi_L(const ExitProblem& p, double t, double t0, double x0, double d) {
  const CoefficientSet& cs = p.coeffs;
  const Spheroid sph(d);
  const double lifetime = spheroid_lifetime(p, t0, d);
  if (!(t >= 0.0 && t <= lifetime * (1.0 + 1e-12) + 1e-15)) {
    std::ostringstream os;
    os << "psi_L: t = " << t << " outside spheroid support [0, " << lifetime << "]";
    throw DomainError(os.str());
  }
  if (t == 0.0) return {x0, x0};
  const double t1 = t0 + t;
  const double u = std::clamp(cs.rho_increment(t0, t1), 0.0, sph.support());
  const Bounds bm = sph.boundary(u);
  const double scale = std::exp(-cs.theta(t1));
  const double centre = cs.c(t1) + (x0 - cs.c(t0)) * std::exp(cs.alpha_integral(t0, t1));
  return {scale * bm.lower + centre, scale * bm.upper + centre};
}

StepResult step_from_exit(const ExitProblem& p, double t, double x, double d,
                          const BrownianExit& exit) {
  const CoefficientSet& cs = p.coeffs;
  const Spheroid sph(d);
  double t_next = cs.rho_advance(t, exit.tau, p.m);
  if (!(t_next > t)) t_next = std::nextafter(t, std::numeric_limits<double>::infinity());

  const Bounds bm = sph.boundary(std::min(exit.tau, sph.support()));
  const double brownian = exit.side == Side::upper ? bm.upper : bm.lower;
  const double x_next = std::exp(-cs.theta(t_next)) * brownian + cs.c(t_next) +
                        (x - cs.c(t)) * std::exp(cs.alpha_integral(t, t_next));
  return {t_next, x_next, d, exit.side};
}

StepResult step(const ExitProblem& p, double t, double x, Rng& rng) {
  if (!in_interior(p, x)) {
    std::ostringstream os;
    os << "step: position " << x << " is not strictly inside the shell";
    throw DomainError(os.str());
  }
  const double d = spheroid_scale(p, t, x);
  const BrownianExit exit = sample_exit(Spheroid(d), rng);
  return step_from_exit(p, t, x, d, exit);
}

namespace {

WalkResult walk(const ExitProblem& p, double t_max, Rng& rng, bool record) {
  p.validate();
  WalkResult out;
  double t = p.t0;
  double x = p.x0;
  if (record) out.skeleton.nodes.push_back({t, x, 0.0});

  std::uint64_t steps = 0;
  bool censored = false;
  double last_x = x;
  while (in_interior(p, x)) {
    if (steps >= p.max_steps) {
      std::ostringstream os;
      os << "walk exceeded the max-step guard (" << p.max_steps << " steps)";
      throw NumericError(os.str());
    }
    const StepResult s = step(p, t, x, rng);
    ++steps;
    if (record) {
      out.skeleton.nodes.back().scale = s.scale;
      out.skeleton.nodes.push_back({s.time, s.position, 0.0});
    }
    last_x = x;
    t = s.time;
    x = s.position;
    if (t >= t_max) {
      censored = true;
      break;
    }
  }

  if (censored) {
    out.sample = {t_max, last_x, side_of(p, last_x), steps, true};
  } else {
    out.sample = {t, x, side_of(p, x), steps, false};
  }
  return out;
}

}  // namespace

WalkResult run(const ExitProblem& p, Rng& rng, bool record_skeleton) {
  return walk(p, std::numeric_limits<double>::infinity(), rng, record_skeleton);
}

WalkResult run_capped(const ExitProblem& p, double t_max, Rng& rng, bool record_skeleton) {
  if (!(t_max > p.t0)) {
    std::ostringstream os;
    os << "run_capped: t_max = " << t_max << " must exceed t0 = " << p.t0;
    throw ConfigError(os.str());
  }
  return walk(p, t_max, rng, record_skeleton);
}

Diagnostics validate(const ExitProblem& p, double horizon) {
  Diagnostics diag;
  diag.horizon = horizon;
  diag.sigma_floor = p.coeffs.sigma_floor();
  if (!(horizon > 0.0)) {
    diag.warnings.push_back("horizon must be positive; no coefficients inspected");
    return diag;
  }
  const CoefficientSet& cs = p.coeffs;
  diag.min_sigma = quad::inf_on([&cs](double t) { return cs.sigma_unchecked(t); }, 0.0, horizon);
  diag.max_abs_alpha = quad::sup_abs_on([&cs](double t) { return cs.alpha(t); }, 0.0, horizon);
  diag.max_abs_beta = quad::sup_abs_on([&cs](double t) { return cs.beta(t); }, 0.0, horizon);
  if (diag.min_sigma < diag.sigma_floor) {
    std::ostringstream os;
    os << "sigma drops to " << diag.min_sigma << " on [0, " << horizon
       << "], below sigma_floor " << diag.sigma_floor;
    diag.warnings.push_back(os.str());
  }
  return diag;
}

}  // namespace exitwalk
