#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "exitwalk/quadrature.hpp"

namespace exitwalk {

using TimeFn = std::function<double(double)>;

/// Closed-form upper bound for the scale denominator Delta_m, as a function
/// of (t0, x0, m, a, b). Installed by presets whose coefficients admit a
/// simpler bound than the generic quadrature expression.
using DeltaBoundFn = std::function<double(double t0, double x0, double m, double a, double b)>;

/// Optional closed forms overriding the quadrature fallbacks.
struct ClosedForms {
  TimeFn theta;
  TimeFn rho;
  TimeFn rho_inv;
  TimeFn c;
  DeltaBoundFn delta_bound;
};

/// Coefficients of the linear SDE
///   dX_t = (alpha(t) X_t + beta(t)) dt + sigma(t) dW_t
/// and the derived primitives
///   theta(t) = -int_0^t alpha,
///   rho(t)   = int_0^t sigma^2 e^{2 theta},
///   c(t)     = e^{-theta(t)} int_0^t beta e^{theta}.
/// Immutable after construction. Every evaluation of sigma is checked
/// against sigma_floor.
class CoefficientSet {
 public:
  CoefficientSet(TimeFn alpha, TimeFn beta, TimeFn sigma, double sigma_floor,
                 ClosedForms closed = {}, quad::Tolerance tol = {});

  double alpha(double t) const { return alpha_(t); }
  double beta(double t) const { return beta_(t); }
  /// sigma(t); throws DomainError if below sigma_floor.
  double sigma(double t) const;
  /// sigma(t) without the floor check, for diagnostics.
  double sigma_unchecked(double t) const { return sigma_(t); }
  double sigma_floor() const noexcept { return sigma_floor_; }
  const quad::Tolerance& tolerance() const noexcept { return tol_; }

  double theta(double t) const;
  double rho(double t) const;
  double rho_inv(double u) const;
  double c(double t) const;

  /// rho'(t) = sigma(t)^2 e^{2 theta(t)}.
  double rho_prime(double t) const;
  /// int_{t0}^{t1} alpha, i.e. theta(t0) - theta(t1).
  double alpha_integral(double t0, double t1) const;
  /// rho(t1) - rho(t0).
  double rho_increment(double t0, double t1) const;
  /// Smallest t1 in [t0, t0 + max_span] with rho(t1) - rho(t0) = du. The
  /// increment must be reachable within the span.
  double rho_advance(double t0, double du, double max_span) const;

  /// E[X_t] for the unstopped diffusion started at x0 at time 0.
  double mean_exact(double x0, double t) const;

  bool has_closed_theta() const noexcept { return static_cast<bool>(closed_.theta); }
  bool has_closed_rho() const noexcept { return static_cast<bool>(closed_.rho); }
  bool has_closed_rho_inv() const noexcept { return static_cast<bool>(closed_.rho_inv); }
  bool has_closed_c() const noexcept { return static_cast<bool>(closed_.c); }
  const DeltaBoundFn& delta_bound() const noexcept { return closed_.delta_bound; }

  /// Same coefficients with every closed form removed (quadrature only).
  CoefficientSet without_closed_forms() const;

 private:
  double theta_quadrature(double t) const;
  double rho_quadrature(double t) const;
  double inverse_time_tolerance(double t) const;

  TimeFn alpha_;
  TimeFn beta_;
  TimeFn sigma_;
  double sigma_floor_;
  ClosedForms closed_;
  quad::Tolerance tol_;
  std::uint64_t cache_id_;
};

}  // namespace exitwalk
