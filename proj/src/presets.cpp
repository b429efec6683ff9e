#include "exitwalk/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "exitwalk/errors.hpp"
#include "exitwalk/spheroid.hpp"

namespace exitwalk::presets {

namespace {

const double kInvSqrtE = 1.0 / std::sqrt(std::numbers::e);

}  // namespace

CoefficientSet brownian() {
  ClosedForms closed;
  closed.theta = [](double) { return 0.0; };
  closed.rho = [](double t) { return t; };
  closed.rho_inv = [](double u) { return u; };
  closed.c = [](double) { return 0.0; };
  return CoefficientSet([](double) { return 0.0; }, [](double) { return 0.0; },
                        [](double) { return 1.0; }, 1.0, std::move(closed));
}

CoefficientSet constant(double alpha0, double beta0, double sigma0) {
  if (!(sigma0 > 0.0)) {
    std::ostringstream os;
    os << "constant preset requires sigma > 0, got " << sigma0;
    throw ConfigError(os.str());
  }
  const double s2 = sigma0 * sigma0;
  ClosedForms closed;
  closed.theta = [alpha0](double t) { return -alpha0 * t; };
  if (alpha0 == 0.0) {
    closed.rho = [s2](double t) { return s2 * t; };
    closed.rho_inv = [s2](double u) { return u / s2; };
    closed.c = [beta0](double t) { return beta0 * t; };
  } else {
    // rho(t) = s2 (1 - e^{-2 alpha0 t}) / (2 alpha0)
    closed.rho = [alpha0, s2](double t) { return -s2 * std::expm1(-2.0 * alpha0 * t) / (2.0 * alpha0); };
    closed.rho_inv = [alpha0, s2](double u) {
      const double arg = -2.0 * alpha0 * u / s2;
      if (!(arg > -1.0)) {
        std::ostringstream os;
        os << "rho_inv: " << u << " beyond the finite range of rho";
        throw DomainError(os.str());
      }
      return -std::log1p(arg) / (2.0 * alpha0);
    };
    closed.c = [alpha0, beta0](double t) { return beta0 * std::expm1(alpha0 * t) / alpha0; };
  }
  return CoefficientSet([alpha0](double) { return alpha0; }, [beta0](double) { return beta0; },
                        [sigma0](double) { return sigma0; }, sigma0, std::move(closed));
}

CoefficientSet ornstein_uhlenbeck(double kappa, double mu, double sigma0) {
  return constant(-kappa, kappa * mu, sigma0);
}

CoefficientSet sinusoidal() {
  ClosedForms closed;
  closed.theta = [](double t) { return -std::log((2.0 + std::sin(t)) / 2.0); };
  closed.rho = [](double t) { return 4.0 * t; };
  closed.rho_inv = [](double u) { return u / 4.0; };
  closed.c = [](double t) {
    const double s = 2.0 + std::sin(t);
    return s * std::log(s / 2.0);
  };
  closed.delta_bound = [](double, double, double m, double a, double b) {
    return sinusoidal_delta(a, b, m);
  };
  return CoefficientSet([](double t) { return std::cos(t) / (2.0 + std::sin(t)); },
                        [](double t) { return std::cos(t); },
                        [](double t) { return 2.0 + std::sin(t); }, 1.0, std::move(closed));
}

double sinusoidal_delta(double a, double b, double m) {
  const double big = 1.0 + std::max(std::abs(a), std::abs(b));
  return 1.5 * (kInvSqrtE + big * std::sqrt(m));
}

double sinusoidal_m(double a, double b) {
  if (!(a < b)) throw ConfigError("sinusoidal_m: requires a < b");
  const double big = 1.0 + std::max(std::abs(a), std::abs(b));
  const double root =
      std::sqrt(1.0 / std::numbers::e + 4.0 / 3.0 * (b - a) * big) - kInvSqrtE;
  const double sqrt_m = root / (2.0 * big);
  return sqrt_m * sqrt_m;
}

Bounds sinusoidal_boundary(double t, double t0, double x0, double d) {
  const double s_now = 2.0 + std::sin(t + t0);
  const double s_start = 2.0 + std::sin(t0);
  const Bounds brownian = Spheroid(d).boundary(std::min(4.0 * t, d * d));
  const double drift = 2.0 * std::log(s_now / s_start);
  const double carried = s_now / s_start * x0;
  return {s_now / 2.0 * (brownian.lower + drift) + carried,
          s_now / 2.0 * (brownian.upper + drift) + carried};
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> kNames = {"bm", "constant", "ou", "sinusoidal", "growth"};
  return kNames;
}

}  // namespace exitwalk::presets
