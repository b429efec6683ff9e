#include "exitwalk/gclass.hpp"

#include <cmath>
#include <sstream>

#include "exitwalk/errors.hpp"
#include "exitwalk/presets.hpp"

namespace exitwalk {

GCoefficientSet GCoefficientSet::constant(double alpha_g, double beta_g, double sigma_g) {
  if (!(sigma_g > 0.0)) throw ConfigError("growth preset requires sigma > 0");
  GCoefficientSet g;
  g.alpha_g = [alpha_g](double) { return alpha_g; };
  g.beta_g = [beta_g](double) { return beta_g; };
  g.sigma_g = [sigma_g](double) { return sigma_g; };
  g.sigma_floor = sigma_g;
  g.constants = Scalars{alpha_g, beta_g, sigma_g};
  return g;
}

CoefficientSet to_lclass(const GCoefficientSet& g) {
  if (g.constants) {
    const auto& k = *g.constants;
    return presets::constant(k.beta_g, k.alpha_g - 0.5 * k.sigma_g * k.sigma_g, k.sigma_g);
  }
  TimeFn alpha_g = g.alpha_g;
  TimeFn sigma_g = g.sigma_g;
  return CoefficientSet(
      g.beta_g,
      [alpha_g, sigma_g](double t) {
        const double s = sigma_g(t);
        return alpha_g(t) - 0.5 * s * s;
      },
      g.sigma_g, g.sigma_floor);
}

GCoefficientSet from_lclass(const CoefficientSet& cs) {
  GCoefficientSet g;
  g.alpha_g = [cs](double t) {
    const double s = cs.sigma_unchecked(t);
    return cs.beta(t) + 0.5 * s * s;
  };
  g.beta_g = [cs](double t) { return cs.alpha(t); };
  g.sigma_g = [cs](double t) { return cs.sigma_unchecked(t); };
  g.sigma_floor = cs.sigma_floor();
  return g;
}

double g_solution(const GCoefficientSet& g, double t, double w) {
  if (!(t >= 0.0)) throw DomainError("g_solution: time must be >= 0");
  if (t == 0.0) return std::exp(w);
  const quad::Tolerance tol;
  const auto beta_integral = [&g, &tol](double s) { return quad::integrate(g.beta_g, 0.0, s, tol); };
  const double b_t = beta_integral(t);
  const double drift = quad::integrate(
      [&](double s) {
        const double sg = g.sigma_g(s);
        return (g.alpha_g(s) - 0.5 * sg * sg) * std::exp(-beta_integral(s));
      },
      0.0, t, tol);
  const double log_c = std::exp(b_t) * drift;
  const double sg = g.sigma_g(t);
  const double gamma_prime = sg * sg * std::exp(-2.0 * b_t);
  return std::exp(log_c + sg / std::sqrt(gamma_prime) * w);
}

ExitProblem log_space_problem(const GExitProblem& gp) {
  if (!(gp.a > 0.0) || !(gp.b > gp.a)) {
    std::ostringstream os;
    os << "growth interval requires 0 < a < b, got [" << gp.a << ", " << gp.b << "]";
    throw DomainError(os.str());
  }
  if (!(gp.x0 > gp.a && gp.x0 < gp.b)) {
    std::ostringstream os;
    os << "growth start x0 = " << gp.x0 << " outside (" << gp.a << ", " << gp.b << ")";
    throw DomainError(os.str());
  }
  ExitProblem p{to_lclass(gp.coeffs)};
  p.a = std::log(gp.a);
  p.b = std::log(gp.b);
  p.x0 = std::log(gp.x0);
  p.t0 = gp.t0;
  p.eps = gp.eps_g / gp.b;
  p.gamma_shell = gp.gamma_shell;
  p.m = gp.m;
  return p;
}

ExitSample run_g(const GExitProblem& gp, Rng& rng) {
  const ExitProblem p = log_space_problem(gp);
  ExitSample s = run(p, rng, false).sample;
  s.position = std::exp(s.position);
  return s;
}

}  // namespace exitwalk
