#pragma once

#include "exitwalk/rng.hpp"
#include "exitwalk/woms_types.hpp"

namespace exitwalk {

/// Brownian heat ball of scale d: the time-space domain |x| <= psi(t),
///   psi(t) = sqrt(t log(d^2 / t)),  t in [0, d^2].
/// The boundary never exceeds d / sqrt(e), reached at t = d^2 / e.
class Spheroid {
 public:
  explicit Spheroid(double d);

  double scale() const noexcept { return d_; }
  /// Lifetime d^2 of the spheroid.
  double support() const noexcept { return d_ * d_; }

  /// (-psi(t), psi(t)); zero at both ends of [0, d^2].
  Bounds boundary(double t) const;
  /// Density of the Brownian exit time on (0, d^2].
  double exit_pdf(double t) const;

 private:
  double d_;
};

struct BrownianExit {
  double tau = 0.0;
  Side side = Side::upper;
};

/// Exact exit draw: tau = d^2 U^2 e^{-N^2}, i.e. -log(tau/d^2) is chi-square
/// with three degrees of freedom, and an independent fair side.
/// Consumes uniform, normal, coin from the stream in that order.
BrownianExit sample_exit(const Spheroid& s, Rng& rng);

/// Same map from explicit draws (u in (0,1], n real).
BrownianExit exit_from_draws(const Spheroid& s, double u, double n, Side side);

}  // namespace exitwalk
