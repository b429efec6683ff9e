#include "exitwalk/spheroid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "exitwalk/errors.hpp"

namespace exitwalk {

Spheroid::Spheroid(double d) : d_(d) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    std::ostringstream os;
    os << "spheroid scale must be positive and finite, got " << d;
    throw DomainError(os.str());
  }
}

Bounds Spheroid::boundary(double t) const {
  const double lifetime = support();
  if (!(t >= 0.0 && t <= lifetime)) {
    std::ostringstream os;
    os << "spheroid boundary: t = " << t << " outside [0, " << lifetime << "]";
    throw DomainError(os.str());
  }
  if (t == 0.0) return {0.0, 0.0};
  const double psi = std::sqrt(t * std::log(lifetime / t));
  return {-psi, psi};
}

double Spheroid::exit_pdf(double t) const {
  const double lifetime = support();
  if (!(t > 0.0 && t <= lifetime)) {
    std::ostringstream os;
    os << "exit_pdf: t = " << t << " outside (0, " << lifetime << "]";
    throw DomainError(os.str());
  }
  return std::sqrt(std::log(lifetime / t) / t) / (d_ * std::sqrt(2.0 * std::numbers::pi));
}

BrownianExit exit_from_draws(const Spheroid& s, double u, double n, Side side) {
  // -log(u^2) is chi-square(2), -log(e^{-n^2}) is chi-square(1).
  return {s.support() * (u * u) * std::exp(-n * n), side};
}

BrownianExit sample_exit(const Spheroid& s, Rng& rng) {
  const double u = rng.uniform();
  const double n = rng.normal();
  // Bernoulli(1/2) = 1 selects the lower boundary.
  const Side side = rng.coin() ? Side::lower : Side::upper;
  return exit_from_draws(s, u, n, side);
}

}  // namespace exitwalk
