#pragma once

#include "exitwalk/coeffs.hpp"
#include "exitwalk/rng.hpp"
#include "exitwalk/woms_types.hpp"

namespace exitwalk {

struct EulerConfig {
  double h = 1e-4;
  bool bridge_correction = true;
  /// Maximal simulated duration after the start time.
  double t_cap = 1e3;

  void validate() const;
};

struct EulerExit {
  double time = 0.0;
  double position = 0.0;
  Side side = Side::upper;
  bool censored = false;
};

/// Reference exit sampler: explicit Euler-Maruyama with coefficients frozen
/// at the left end of each step. With bridge_correction, an interior step
/// still exits with the Brownian-bridge crossing probability
///   exp(-2 (b - X_k)(b - X_{k+1}) / (sigma^2 h))   (and likewise at a).
/// The exit position is snapped to the crossed boundary.
EulerExit euler_exit(const CoefficientSet& cs, double a, double b, double x0,
                     const EulerConfig& cfg, Rng& rng, double t0 = 0.0);

}  // namespace exitwalk
