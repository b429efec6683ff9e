#include "exitwalk/euler.hpp"

#include <cmath>
#include <sstream>

#include "exitwalk/errors.hpp"

namespace exitwalk {

void EulerConfig::validate() const {
  if (!(h > 0.0) || !(t_cap > 0.0)) {
    std::ostringstream os;
    os << "Euler config requires h > 0 and t_cap > 0 (h=" << h << ", t_cap=" << t_cap << ")";
    throw ConfigError(os.str());
  }
}

EulerExit euler_exit(const CoefficientSet& cs, double a, double b, double x0,
                     const EulerConfig& cfg, Rng& rng, double t0) {
  cfg.validate();
  if (!(a < x0 && x0 < b)) {
    std::ostringstream os;
    os << "euler_exit: requires a < x0 < b (a=" << a << ", x0=" << x0 << ", b=" << b << ")";
    throw DomainError(os.str());
  }
  const double h = cfg.h;
  const double sqrt_h = std::sqrt(h);
  // Crossing probabilities below e^{-40} are not sampled.
  constexpr double kNegligible = 40.0;

  double x = x0;
  for (std::uint64_t k = 0;; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    if (t - t0 >= cfg.t_cap) return {t, x, (x - a) >= (b - x) ? Side::upper : Side::lower, true};

    const double sg = cs.sigma(t);
    const double next = x + (cs.alpha(t) * x + cs.beta(t)) * h + sg * sqrt_h * rng.normal();
    const double t_next = t0 + static_cast<double>(k + 1) * h;
    if (next >= b) return {t_next, b, Side::upper, false};
    if (next <= a) return {t_next, a, Side::lower, false};

    if (cfg.bridge_correction) {
      // exp(-2 (b - x)(b - next) / (sigma^2 h)) and the same at a; both are
      // below e^{-40} unless a product falls under 20 sigma^2 h.
      const double var = sg * sg * h;
      const double up_prod = (b - x) * (b - next);
      const double lo_prod = (x - a) * (next - a);
      if (up_prod < kNegligible * 0.5 * var || lo_prod < kNegligible * 0.5 * var) {
        const double p_up = std::exp(-2.0 * up_prod / var);
        const double p_lo = std::exp(-2.0 * lo_prod / var);
        const double u = rng.uniform();
        if (u <= p_up) return {t_next, b, Side::upper, false};
        if (u <= p_up + p_lo) return {t_next, a, Side::lower, false};
      }
    }
    x = next;
  }
}

}  // namespace exitwalk
