#pragma once

#include <optional>

#include "exitwalk/coeffs.hpp"
#include "exitwalk/rng.hpp"
#include "exitwalk/woms.hpp"

namespace exitwalk {

/// Coefficients of the growth diffusion
///   dY = (alpha_g Y + beta_g Y log Y) dt + sigma_g Y dW,
/// the exponential image of an L-class diffusion.
struct GCoefficientSet {
  TimeFn alpha_g;
  TimeFn beta_g;
  TimeFn sigma_g;
  double sigma_floor = 1.0;

  struct Scalars {
    double alpha_g;
    double beta_g;
    double sigma_g;
  };
  /// Set when all three coefficients are constants; enables closed forms.
  std::optional<Scalars> constants;

  static GCoefficientSet constant(double alpha_g, double beta_g, double sigma_g);
};

/// L-class coefficients of log Y: alpha = beta_g, beta = alpha_g - sigma_g^2/2,
/// sigma = sigma_g.
CoefficientSet to_lclass(const GCoefficientSet& g);

/// Growth coefficients of exp X for an L-class X: alpha_g = beta + sigma^2/2,
/// beta_g = alpha, sigma_g = sigma.
GCoefficientSet from_lclass(const CoefficientSet& cs);

/// G(t, w) = C(t) exp(sigma_g(t) / sqrt(gamma_g'(t)) w), where
///   gamma_g(t) = int_0^t sigma_g^2 e^{-2 int_0^s beta_g},
///   C(t) = exp(e^{int_0^t beta_g} int_0^t (alpha_g - sigma_g^2/2) e^{-int_0^s beta_g}).
/// G(0, 0) = 1.
double g_solution(const GCoefficientSet& g, double t, double w);

struct GExitProblem {
  GCoefficientSet coeffs;
  double a = 0.5;
  double b = 2.0;
  double x0 = 1.0;
  double t0 = 0.0;
  double eps_g = 1e-3;
  double gamma_shell = 1e-4;
  double m = 1.0;
};

/// The log-space L-class problem on [log a, log b] from log x0 with shell
/// width eps_g / b.
ExitProblem log_space_problem(const GExitProblem& gp);

/// Exit of the growth diffusion: the log-space walk with time unchanged and
/// position exponentiated.
ExitSample run_g(const GExitProblem& gp, Rng& rng);

}  // namespace exitwalk
