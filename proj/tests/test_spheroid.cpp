#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "exitwalk/errors.hpp"
#include "exitwalk/quadrature.hpp"
#include "exitwalk/rng.hpp"
#include "exitwalk/spheroid.hpp"

namespace exitwalk {
namespace {

const double kInvSqrtE = 1.0 / std::sqrt(std::numbers::e);

TEST(Psi, Examples) {
  const Bounds end = Spheroid(1.0).boundary(1.0);
  EXPECT_EQ(end.lower, 0.0);
  EXPECT_EQ(end.upper, 0.0);
  const Bounds peak = Spheroid(1.0).boundary(1.0 / std::numbers::e);
  EXPECT_NEAR(peak.upper, kInvSqrtE, 1e-15);
  EXPECT_EQ(peak.lower, -peak.upper);
  const Bounds two = Spheroid(2.0).boundary(2.0);
  EXPECT_NEAR(two.upper, std::sqrt(2.0 * std::log(2.0)), 1e-15);
  EXPECT_NEAR(two.upper, 1.17741, 1e-5);
}

TEST(Psi, ZeroAtBothEnds) {
  for (double d : {0.1, 1.0, 4.0}) {
    const Spheroid s(d);
    EXPECT_EQ(s.boundary(0.0).upper, 0.0);
    EXPECT_EQ(s.boundary(d * d).upper, 0.0);
  }
}

TEST(Psi, DomainErrors) {
  const Spheroid s(1.5);
  EXPECT_THROW(s.boundary(-1e-12), DomainError);
  EXPECT_THROW(s.boundary(2.25 * (1 + 1e-12)), DomainError);
  EXPECT_THROW(Spheroid(0.0), DomainError);
  EXPECT_THROW(Spheroid(-1.0), DomainError);
}

TEST(Psi, BoundedByScaleOverRootE) {
  for (double d : {0.3, 1.0, 2.7}) {
    const Spheroid s(d);
    for (int i = 0; i <= 5000; ++i) {
      const double t = std::min(d * d * i / 5000.0, s.support());
      EXPECT_LE(s.boundary(t).upper, d * kInvSqrtE * (1 + 1e-15));
    }
    const auto ext = quad::maximize_on([&s](double t) { return s.boundary(t).upper; }, 0.0, d * d);
    EXPECT_NEAR(ext.value, d * kInvSqrtE, 1e-12 * std::max(1.0, d));
    EXPECT_NEAR(ext.argmax, d * d / std::numbers::e, 1e-6 * d * d);
  }
}

TEST(ExitPdf, Examples) {
  EXPECT_EQ(Spheroid(1.0).exit_pdf(1.0), 0.0);
  EXPECT_NEAR(Spheroid(1.0).exit_pdf(1.0 / std::numbers::e),
              std::sqrt(std::numbers::e) / std::sqrt(2.0 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(Spheroid(1.0).exit_pdf(1.0 / std::numbers::e), 0.65774, 1e-5);
  EXPECT_THROW(Spheroid(1.0).exit_pdf(0.0), DomainError);
  EXPECT_THROW(Spheroid(1.0).exit_pdf(1.5), DomainError);
}

TEST(ExitPdf, Normalized) {
  for (double d : {0.5, 1.0, 3.0}) {
    const Spheroid s(d);
    const double total =
        quad::integrate([&s](double t) { return t <= 0.0 ? 0.0 : s.exit_pdf(t); }, 0.0, d * d);
    EXPECT_NEAR(total, 1.0, 1e-8) << "d=" << d;
  }
}

TEST(SampleExit, ForcedStreamEndpoint) {
  const Spheroid s(1.7);
  EXPECT_EQ(exit_from_draws(s, 1.0, 0.0, Side::upper).tau, s.support());
}

TEST(SampleExit, SupportAndDeterminism) {
  const Spheroid s(0.8);
  Rng r1(42), r2(42);
  for (int i = 0; i < 10000; ++i) {
    const BrownianExit e1 = sample_exit(s, r1);
    const BrownianExit e2 = sample_exit(s, r2);
    EXPECT_GT(e1.tau, 0.0);
    EXPECT_LE(e1.tau, s.support());
    EXPECT_EQ(e1.tau, e2.tau);
    EXPECT_EQ(e1.side, e2.side);
  }
}

// Oracle: under the exit density, -log(tau/d^2) is chi-square with three
// degrees of freedom, so E[tau/d^2] = E[e^{-chi2_3}] = 3^{-3/2}.
TEST(SampleExit, MeanMatchesDensity) {
  const double oracle_mean = quad::integrate(
      [](double t) { return t <= 0.0 ? 0.0 : t * Spheroid(1.0).exit_pdf(t); }, 0.0, 1.0);
  ASSERT_NEAR(oracle_mean, std::pow(3.0, -1.5), 1e-9);
  const Spheroid s(1.0);
  Rng rng(2024);
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_exit(s, rng).tau;
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  EXPECT_NEAR(mean, oracle_mean, 3.0 * se);
}

// Optional stopping: E[tau] = E[W_tau^2] = E[psi(tau)^2].
TEST(SampleExit, OptionalStoppingIdentity) {
  const Spheroid s(1.3);
  Rng rng(9);
  const int n = 400000;
  double diff = 0.0, diff2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const BrownianExit e = sample_exit(s, rng);
    const double w = s.boundary(e.tau).upper;
    const double x = e.tau - w * w;
    diff += x;
    diff2 += x * x;
  }
  const double mean = diff / n;
  const double se = std::sqrt((diff2 / n - mean * mean) / n);
  EXPECT_NEAR(mean, 0.0, 3.5 * se);
}

TEST(SampleExit, SideIsFairCoin) {
  const Spheroid s(1.0);
  Rng rng(5);
  const int n = 100000;
  int upper = 0;
  for (int i = 0; i < n; ++i) upper += sample_exit(s, rng).side == Side::upper;
  EXPECT_NEAR(upper / static_cast<double>(n), 0.5, 3.0 * std::sqrt(0.25 / n));
}

TEST(SampleExit, KsAgainstQuadratureCdf) {
  const Spheroid s(1.0);
  Rng rng(77);
  const int n = 100000;
  std::vector<double> taus(n);
  for (auto& t : taus) t = sample_exit(s, rng).tau;
  std::sort(taus.begin(), taus.end());
  // -log(tau) ~ chi-square(3): F(t) = Q(3/2, y/2) with y = -log t, and
  // Q(3/2, x) = erfc(sqrt x) + 2 sqrt(x/pi) e^{-x}.
  const auto cdf = [](double t) {
    const double x = -0.5 * std::log(t);
    return std::erfc(std::sqrt(x)) + 2.0 * std::sqrt(x / std::numbers::pi) * std::exp(-x);
  };
  ASSERT_NEAR(cdf(0.3),
              quad::integrate([&s](double u) { return u <= 0.0 ? 0.0 : s.exit_pdf(u); }, 0.0, 0.3),
              1e-9);
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = cdf(taus[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(f - (i + 1.0) / n)});
  }
  // Asymptotic one-sample critical value at alpha = 0.001.
  EXPECT_LT(d, 1.95 / std::sqrt(static_cast<double>(n)));
}

TEST(Rng, UniformInHalfOpenUnit) {
  Rng rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    EXPECT_GT(u, 0.0);
    EXPECT_LE(u, 1.0);
  }
}

TEST(Rng, ReplicaStreamsDiffer) {
  Rng a = Rng::for_replica(1, 0), b = Rng::for_replica(1, 1), c = Rng::for_replica(2, 0);
  Rng a2 = Rng::for_replica(1, 0);
  const double ua = a.uniform();
  EXPECT_NE(ua, b.uniform());
  EXPECT_NE(ua, c.uniform());
  EXPECT_EQ(ua, a2.uniform());
}

}  // namespace
}  // namespace exitwalk
