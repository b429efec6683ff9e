#pragma once

#include <string>
#include <vector>

#include "exitwalk/coeffs.hpp"
#include "exitwalk/woms_types.hpp"

namespace exitwalk::presets {

/// Standard Brownian motion: alpha = beta = 0, sigma = 1.
CoefficientSet brownian();

/// Constant coefficients alpha0, beta0, sigma0 (sigma0 > 0), with closed forms.
CoefficientSet constant(double alpha0, double beta0, double sigma0);

/// Ornstein-Uhlenbeck dX = kappa (mu - X) dt + sigma0 dW.
CoefficientSet ornstein_uhlenbeck(double kappa, double mu, double sigma0);

/// alpha = cos/(2+sin), beta = cos, sigma = 2+sin. Ships closed forms for
/// theta, rho(t) = 4t, its inverse, c and the simplified Delta_m bound.
CoefficientSet sinusoidal();

/// Delta_m bound for the sinusoidal preset:
///   3/2 (1/sqrt(e) + (1 + max(|a|,|b|)) sqrt(m)).
double sinusoidal_delta(double a, double b, double m);

/// Horizon step making min(1, kappa_+-) = 1 for the sinusoidal preset,
/// i.e. the root of 2 Delta_m sqrt(m) = b - a.
double sinusoidal_m(double a, double b);

/// Closed-form spheroid boundaries of the sinusoidal preset at relative time
/// t for a spheroid of scale d started at (t0, x0).
Bounds sinusoidal_boundary(double t, double t0, double x0, double d);

/// Names accepted by the CLI --preset flag.
const std::vector<std::string>& names();

}  // namespace exitwalk::presets
