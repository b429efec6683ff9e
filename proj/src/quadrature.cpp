#include "exitwalk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "exitwalk/errors.hpp"

namespace exitwalk::quad {

namespace {

// Kronrod abscissae (positive half, center last) and weights; Gauss weights
// belong to the odd-indexed Kronrod nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  int depth;

  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const ScalarFn& f, double lo, double hi, int depth) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_k = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    kronrod += kWgk[j] * (f1[j] + f2[j]);
    abs_k += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double value = kronrod * half;
  asc *= std::abs(half);
  abs_k *= std::abs(half);

  // QUADPACK error scaling
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) {
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  if (abs_k > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * abs_k, err);
  }
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "integrand not finite on [" << lo << ", " << hi << "]";
    throw QuadratureError(os.str(), value, std::numeric_limits<double>::infinity());
  }
  return {lo, hi, value, err, depth};
}

}  // namespace

void Tolerance::validate() const {
  if (!(rel > 0.0) || !(abs > 0.0) || max_depth < 1) {
    throw ConfigError("quadrature tolerance requires rel > 0, abs > 0, max_depth >= 1");
  }
}

QuadResult integrate_detailed(const ScalarFn& f, double lo, double hi, const Tolerance& tol) {
  tol.validate();
  if (!(lo <= hi)) throw DomainError("integrate: requires lo <= hi");
  if (lo == hi) return {0.0, 0.0, 0};

  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod(f, lo, hi, 0);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);

  // Bound on the number of live segments; generous for smooth integrands.
  constexpr int kMaxSegments = 20000;
  while (total_err > std::max(tol.abs, tol.rel * std::abs(total))) {
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (worst.depth >= tol.max_depth || static_cast<int>(heap.size()) >= kMaxSegments ||
        mid <= worst.lo || mid >= worst.hi) {
      std::ostringstream os;
      os << "integrate: tolerance not reached on [" << lo << ", " << hi
         << "], achieved error " << total_err;
      throw QuadratureError(os.str(), total, total_err);
    }
    heap.pop();
    Segment left = gauss_kronrod(f, worst.lo, mid, worst.depth + 1);
    Segment right = gauss_kronrod(f, mid, worst.hi, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to avoid drift from incremental updates.
  double value = 0.0;
  double error = 0.0;
  const int count = static_cast<int>(heap.size());
  std::vector<Segment> segments;
  segments.reserve(heap.size());
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& x, const Segment& y) { return x.lo < y.lo; });
  for (const auto& s : segments) {
    value += s.value;
    error += s.error;
  }
  return {value, error, count};
}

namespace {

constexpr double kInvPhi = 0.6180339887498948482;

// Golden-section maximization of g on [lo, hi].
Extremum golden_max(const ScalarFn& g, double lo, double hi) {
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double g1 = g(x1);
  double g2 = g(x2);
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    if (g1 < g2) {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + kInvPhi * (hi - lo);
      g2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - kInvPhi * (hi - lo);
      g1 = g(x1);
    }
  }
  return g1 >= g2 ? Extremum{x1, g1} : Extremum{x2, g2};
}

}  // namespace

Extremum maximize_on(const ScalarFn& f, double lo, double hi, int grid_points) {
  if (!(lo <= hi)) throw DomainError("maximize_on: requires lo <= hi");
  if (grid_points < 2 || lo == hi) {
    return {lo, f(lo)};
  }
  const double step = (hi - lo) / (grid_points - 1);
  Extremum best{lo, f(lo)};
  int best_i = 0;
  for (int i = 1; i < grid_points; ++i) {
    const double t = (i == grid_points - 1) ? hi : lo + i * step;
    const double v = f(t);
    if (v > best.value) {
      best = {t, v};
      best_i = i;
    }
  }
  const double left = (best_i == 0) ? lo : lo + (best_i - 1) * step;
  const double right = (best_i == grid_points - 1) ? hi : std::min(hi, lo + (best_i + 1) * step);
  const Extremum refined = golden_max(f, left, right);
  return refined.value > best.value ? refined : best;
}

double sup_abs_on(const ScalarFn& f, double lo, double hi, int grid_points) {
  return maximize_on([&f](double t) { return std::abs(f(t)); }, lo, hi, grid_points).value;
}

double inf_on(const ScalarFn& f, double lo, double hi, int grid_points) {
  return -maximize_on([&f](double t) { return -f(t); }, lo, hi, grid_points).value;
}

double invert_increasing(const ScalarFn& f, const ScalarFn& fprime, double target, double lo,
                         double hi, double xtol) {
  if (!(lo <= hi)) throw DomainError("invert_increasing: requires lo <= hi");
  double f_lo = f(lo) - target;
  if (f_lo >= 0.0) return lo;
  double f_hi = f(hi) - target;
  if (f_hi <= 0.0) return hi;

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    const double fx = f(x) - target;
    if (fx == 0.0) return x;
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= xtol) return 0.5 * (lo + hi);

    double next = 0.5 * (lo + hi);
    const double slope = fprime ? fprime(x) : 0.0;
    if (slope > 0.0 && std::isfinite(slope)) {
      const double newton = x - fx / slope;
      if (newton > lo && newton < hi) {
        if (std::abs(newton - x) <= xtol) return newton;
        next = newton;
      }
    }
    x = next;
  }
  throw NumericError("invert_increasing: no convergence within 300 iterations");
}

}  // namespace exitwalk::quad
