#pragma once

#include <functional>

namespace exitwalk::quad {

using ScalarFn = std::function<double(double)>;

struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-12;
  // Maximal bisection depth of any subinterval in the adaptive scheme.
  int max_depth = 128;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod integration of f over [lo, hi].
/// Throws QuadratureError (carrying the best estimate) when an interval
/// needing refinement would exceed tol.max_depth.
QuadResult integrate_detailed(const ScalarFn& f, double lo, double hi,
                              const Tolerance& tol = {});

inline double integrate(const ScalarFn& f, double lo, double hi,
                        const Tolerance& tol = {}) {
  return integrate_detailed(f, lo, hi, tol).value;
}

/// Upper estimate of sup |f| on [lo, hi]: a uniform grid of grid_points
/// nodes followed by a golden-section search around the grid argmax.
/// The result is never smaller than the largest grid value.
double sup_abs_on(const ScalarFn& f, double lo, double hi, int grid_points = 1024);

/// Location and value of the maximum of f on [lo, hi] (grid plus golden
/// refinement, same scheme as sup_abs_on).
struct Extremum {
  double argmax = 0.0;
  double value = 0.0;
};
Extremum maximize_on(const ScalarFn& f, double lo, double hi, int grid_points = 1024);

/// Lower estimate of inf f on [lo, hi] by the same scheme.
double inf_on(const ScalarFn& f, double lo, double hi, int grid_points = 1024);

/// Solves f(x) = target for nondecreasing f on the bracket [lo, hi] with
/// f(lo) <= target <= f(hi). Newton steps using fprime are accepted only when
/// they stay inside the current bracket; otherwise the bracket is bisected.
/// Converges when the bracket or the step is below xtol.
double invert_increasing(const ScalarFn& f, const ScalarFn& fprime, double target,
                         double lo, double hi, double xtol);

}  // namespace exitwalk::quad
