#include "exitwalk/coeffs.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <utility>

#include "exitwalk/errors.hpp"

namespace exitwalk {

namespace {

std::atomic<std::uint64_t> next_cache_id{1};

// Most recent (t, value) per thread; exact-argument hits only, so results
// never depend on call history.
struct LastValue {
  std::uint64_t id = 0;
  double t = 0.0;
  double value = 0.0;
};
thread_local LastValue theta_cache;
thread_local LastValue rho_cache;

void require_time(double t, const char* what) {
  if (!(t >= 0.0)) {
    std::ostringstream os;
    os << what << ": time must be >= 0, got " << t;
    throw DomainError(os.str());
  }
}

}  // namespace

CoefficientSet::CoefficientSet(TimeFn alpha, TimeFn beta, TimeFn sigma, double sigma_floor,
                               ClosedForms closed, quad::Tolerance tol)
    : alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      sigma_(std::move(sigma)),
      sigma_floor_(sigma_floor),
      closed_(std::move(closed)),
      tol_(tol),
      cache_id_(next_cache_id.fetch_add(1)) {
  if (!alpha_ || !beta_ || !sigma_) {
    throw ConfigError("coefficient set requires alpha, beta and sigma");
  }
  if (!(sigma_floor_ > 0.0)) {
    throw ConfigError("sigma_floor must be strictly positive");
  }
  tol_.validate();
}

double CoefficientSet::sigma(double t) const {
  const double s = sigma_(t);
  if (!(s >= sigma_floor_)) {
    std::ostringstream os;
    os << "sigma(" << t << ") = " << s << " is below sigma_floor " << sigma_floor_;
    throw DomainError(os.str());
  }
  return s;
}

double CoefficientSet::theta(double t) const {
  require_time(t, "theta");
  if (closed_.theta) return closed_.theta(t);
  if (theta_cache.id == cache_id_ && theta_cache.t == t) return theta_cache.value;
  const double v = theta_quadrature(t);
  theta_cache = {cache_id_, t, v};
  return v;
}

double CoefficientSet::theta_quadrature(double t) const {
  return -quad::integrate(alpha_, 0.0, t, tol_);
}

double CoefficientSet::alpha_integral(double t0, double t1) const {
  if (closed_.theta) return closed_.theta(t0) - closed_.theta(t1);
  return quad::integrate(alpha_, t0, t1, tol_);
}

double CoefficientSet::rho_prime(double t) const {
  const double s = sigma(t);
  return s * s * std::exp(2.0 * theta(t));
}

double CoefficientSet::rho(double t) const {
  require_time(t, "rho");
  if (closed_.rho) return closed_.rho(t);
  if (rho_cache.id == cache_id_ && rho_cache.t == t) return rho_cache.value;
  const double v = rho_quadrature(t);
  rho_cache = {cache_id_, t, v};
  return v;
}

double CoefficientSet::rho_quadrature(double t) const {
  if (closed_.theta) {
    return quad::integrate(
        [this](double s) {
          const double sg = sigma(s);
          return sg * sg * std::exp(2.0 * closed_.theta(s));
        },
        0.0, t, tol_);
  }
  return rho_increment(0.0, t);
}

double CoefficientSet::rho_increment(double t0, double t1) const {
  require_time(t0, "rho_increment");
  if (closed_.rho) return closed_.rho(t1) - closed_.rho(t0);
  if (closed_.theta) {
    return quad::integrate(
        [this](double s) {
          const double sg = sigma(s);
          return sg * sg * std::exp(2.0 * closed_.theta(s));
        },
        t0, t1, tol_);
  }
  // theta(s) = theta(t0) - int_{t0}^{s} alpha keeps the inner integrals short.
  const double theta0 = theta(t0);
  return quad::integrate(
      [this, t0, theta0](double s) {
        const double sg = sigma(s);
        const double th = theta0 - quad::integrate(alpha_, t0, s, tol_);
        return sg * sg * std::exp(2.0 * th);
      },
      t0, t1, tol_);
}

double CoefficientSet::inverse_time_tolerance(double t) const {
  return 1e-12 * std::max(1.0, std::abs(t));
}

double CoefficientSet::rho_inv(double u) const {
  if (!(u >= 0.0)) {
    std::ostringstream os;
    os << "rho_inv: argument must be >= 0, got " << u;
    throw DomainError(os.str());
  }
  if (closed_.rho_inv) return closed_.rho_inv(u);
  if (u == 0.0) return 0.0;

  double hi = 1.0;
  int doublings = 0;
  while (rho(hi) < u) {
    hi *= 2.0;
    if (++doublings > 60) {
      std::ostringstream os;
      os << "rho_inv: bracket expansion failed for u = " << u
         << " (rho plateaus below the target)";
      throw NumericError(os.str());
    }
  }
  return quad::invert_increasing([this](double t) { return rho(t); },
                                 [this](double t) { return rho_prime(t); }, u, 0.0, hi,
                                 inverse_time_tolerance(hi));
}

double CoefficientSet::rho_advance(double t0, double du, double max_span) const {
  require_time(t0, "rho_advance");
  if (du <= 0.0) return t0;
  if (closed_.rho_inv && closed_.rho) {
    return closed_.rho_inv(du + closed_.rho(t0));
  }
  const double t_hi = t0 + max_span;
  const double reachable = rho_increment(t0, t_hi);
  if (du >= reachable) return t_hi;
  return quad::invert_increasing([this, t0](double t) { return rho_increment(t0, t); },
                                 [this](double t) { return rho_prime(t); }, du, t0, t_hi,
                                 inverse_time_tolerance(t_hi));
}

double CoefficientSet::c(double t) const {
  require_time(t, "c");
  if (closed_.c) return closed_.c(t);
  if (t == 0.0) return 0.0;
  const double integral =
      quad::integrate([this](double s) { return beta_(s) * std::exp(theta(s)); }, 0.0, t, tol_);
  return std::exp(-theta(t)) * integral;
}

double CoefficientSet::mean_exact(double x0, double t) const {
  return x0 * std::exp(-theta(t)) + c(t);
}

CoefficientSet CoefficientSet::without_closed_forms() const {
  return CoefficientSet(alpha_, beta_, sigma_, sigma_floor_, ClosedForms{}, tol_);
}

}  // namespace exitwalk
