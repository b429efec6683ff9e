#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "exitwalk/coeffs.hpp"
#include "exitwalk/rng.hpp"
#include "exitwalk/spheroid.hpp"
#include "exitwalk/woms_types.hpp"

namespace exitwalk {

/// Exit of an L-class diffusion from [a, b], started at (t0, x0). The walk
/// stops once the position enters the shell [a, a+eps] U [b-eps, b].
struct ExitProblem {
  CoefficientSet coeffs;
  double a = -1.0;
  double b = 1.0;
  double x0 = 0.0;
  double t0 = 0.0;
  double eps = 1e-2;
  /// Shrink factor of the admissible interval [a + g(x-a), b - g(b-x)].
  double gamma_shell = 1e-4;
  /// Horizon step bounding the lifetime of each spheroid.
  double m = 1.0;
  std::uint64_t max_steps = 10'000'000;

  /// Throws ConfigError unless a < a+eps < b-eps < b, 0 < gamma < 1, m > 0,
  /// t0 >= 0 and x0 in [a, b].
  void validate() const;
};

struct WalkNode {
  double time = 0.0;
  double position = 0.0;
  /// Scale of the spheroid launched from this node (0 for the final node).
  double scale = 0.0;
};

/// Successive spheroid exits (T_n, X_n); nodes[0] is the start.
struct WalkSkeleton {
  std::vector<WalkNode> nodes;
};

struct ExitSample {
  double time = 0.0;
  double position = 0.0;
  Side side = Side::upper;
  std::uint64_t steps = 0;
  bool censored = false;
};

struct WalkResult {
  ExitSample sample;
  WalkSkeleton skeleton;
};

struct StepResult {
  double time = 0.0;
  double position = 0.0;
  double scale = 0.0;
  Side side = Side::upper;
};

/// (a + g(x - a), b - g(b - x)).
Bounds shrunken_bounds(const ExitProblem& p, double x);

/// Containment denominator of the scale parameter at (t0, x0):
///   e^{-theta(t0)} e^{int |alpha|} (1/sqrt(e) + sqrt(int (beta + x0 alpha)^2 / sigma^2))
/// with both integrals over [t0, t0 + m]. A preset-supplied bound replaces
/// the quadrature when present.
double delta_m(const ExitProblem& p, double t0, double x0);

/// Largest admissible spheroid scale at (t0, x0): the spheroid stays in the
/// shrunken interval and its lifetime does not exceed m.
double spheroid_scale(const ExitProblem& p, double t0, double x0);

/// Boundaries of the generalized spheroid of scale d started at (t0, x0),
/// at relative time t in [0, spheroid_lifetime].
Bounds psi_L(const ExitProblem& p, double t, double t0, double x0, double d);

/// Lifetime rho^{-1}(d^2 + rho(t0)) - t0 of the generalized spheroid.
double spheroid_lifetime(const ExitProblem& p, double t0, double d);

/// One transition from (t, x) given a Brownian exit of the scale-d spheroid.
StepResult step_from_exit(const ExitProblem& p, double t, double x, double d,
                          const BrownianExit& exit);

/// One random transition from (t, x); x must lie strictly inside the shell.
StepResult step(const ExitProblem& p, double t, double x, Rng& rng);

/// The full stopped walk. Skeleton recording can be disabled for batch use.
WalkResult run(const ExitProblem& p, Rng& rng, bool record_skeleton = true);

/// Walk stopped at the first node with T_n >= t_max; such a walk is reported
/// censored with time t_max and the position of the last node before t_max.
WalkResult run_capped(const ExitProblem& p, double t_max, Rng& rng, bool record_skeleton = true);

struct Diagnostics {
  double horizon = 0.0;
  double min_sigma = 0.0;
  double max_abs_alpha = 0.0;
  double max_abs_beta = 0.0;
  double sigma_floor = 0.0;
  std::vector<std::string> warnings;
};

/// Finite-horizon coefficient diagnostics on [0, horizon].
Diagnostics validate(const ExitProblem& p, double horizon);

}  // namespace exitwalk
