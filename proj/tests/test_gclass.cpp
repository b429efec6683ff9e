#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "exitwalk/errors.hpp"
#include "exitwalk/gclass.hpp"
#include "exitwalk/harness.hpp"

namespace exitwalk {
namespace {

GCoefficientSet varying() {
  GCoefficientSet g;
  g.alpha_g = [](double t) { return 0.3 + 0.2 * std::sin(t); };
  g.beta_g = [](double t) { return -0.5 * std::cos(t); };
  g.sigma_g = [](double t) { return 1.0 + 0.25 * std::sin(2.0 * t); };
  g.sigma_floor = 0.75;
  return g;
}

TEST(ToLclass, GeometricMapsToDriftlessBrownian) {
  const CoefficientSet cs = to_lclass(GCoefficientSet::constant(0.5, 0.0, 1.0));
  for (double t : {0.0, 0.4, 3.0}) {
    EXPECT_EQ(cs.alpha(t), 0.0);
    EXPECT_EQ(cs.beta(t), 0.0);
    EXPECT_EQ(cs.sigma(t), 1.0);
  }
}

TEST(ToLclass, ZeroBetaGivesZeroAlpha) {
  GCoefficientSet g = varying();
  g.beta_g = [](double) { return 0.0; };
  const CoefficientSet cs = to_lclass(g);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(cs.alpha(0.3 * i), 0.0);
}

TEST(ToLclass, RoundTrip) {
  const GCoefficientSet g = varying();
  const GCoefficientSet back = from_lclass(to_lclass(g));
  for (int i = 0; i <= 40; ++i) {
    const double t = 0.25 * i;
    EXPECT_NEAR(back.alpha_g(t), g.alpha_g(t), 1e-15);
    EXPECT_EQ(back.beta_g(t), g.beta_g(t));
    EXPECT_EQ(back.sigma_g(t), g.sigma_g(t));
  }
}

TEST(GSolution, InitialCondition) {
  EXPECT_EQ(g_solution(varying(), 0.0, 0.0), 1.0);
  EXPECT_THROW(g_solution(varying(), -1.0, 0.0), DomainError);
}

TEST(GSolution, GeometricCase) {
  const GCoefficientSet g = GCoefficientSet::constant(0.5, 0.0, 1.0);
  for (double t : {0.1, 1.0, 4.0}) {
    for (double w : {-1.3, 0.0, 0.7}) EXPECT_NEAR(g_solution(g, t, w), std::exp(w), 1e-12);
  }
}

// log G(t, w) against the L-class map f_L(t, w) = e^{-theta(t)} w + c(t).
TEST(GSolution, MatchesLclassMap) {
  for (const GCoefficientSet& g :
       {varying(), GCoefficientSet::constant(0.2, -0.7, 0.9), GCoefficientSet::constant(1.0, 0.4, 2.0)}) {
    const CoefficientSet cs = to_lclass(g);
    for (int i = 1; i <= 12; ++i) {
      const double t = 0.4 * i;
      for (double w : {-2.0, -0.3, 0.0, 1.1}) {
        const double f_l = std::exp(-cs.theta(t)) * w + cs.c(t);
        EXPECT_NEAR(std::log(g_solution(g, t, w)), f_l, 1e-8) << "t=" << t << " w=" << w;
      }
    }
  }
}

TEST(LogSpace, Mapping) {
  GExitProblem gp;
  gp.coeffs = GCoefficientSet::constant(0.5, 0.0, 1.0);
  const ExitProblem p = log_space_problem(gp);
  EXPECT_EQ(p.a, -std::log(2.0));
  EXPECT_EQ(p.b, std::log(2.0));
  EXPECT_EQ(p.x0, 0.0);
  EXPECT_EQ(p.eps, gp.eps_g / gp.b);
}

TEST(LogSpace, RejectsNonPositive) {
  GExitProblem gp;
  gp.coeffs = GCoefficientSet::constant(0.5, 0.0, 1.0);
  gp.a = 0.0;
  EXPECT_THROW(log_space_problem(gp), DomainError);
  gp.a = -1.0;
  EXPECT_THROW(log_space_problem(gp), DomainError);
  gp.a = 0.5;
  gp.x0 = 3.0;
  EXPECT_THROW(log_space_problem(gp), DomainError);
}

TEST(RunG, ExactImageOfLclassRun) {
  for (const GCoefficientSet& coeffs : {GCoefficientSet::constant(0.5, 0.0, 1.0), varying()}) {
    GExitProblem gp;
    gp.coeffs = coeffs;
    gp.a = 0.6;
    gp.b = 1.8;
    gp.x0 = 1.1;
    gp.eps_g = 1e-2;
    const ExitProblem p = log_space_problem(gp);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng a(seed), b(seed);
      const ExitSample g = run_g(gp, a);
      const ExitSample l = run(p, b).sample;
      EXPECT_EQ(g.time, l.time);
      EXPECT_EQ(g.position, std::exp(l.position));
      EXPECT_EQ(g.steps, l.steps);
      EXPECT_EQ(g.side, l.side);
      EXPECT_GT(g.position, 0.0);
      const double e = p.eps;
      const bool in_shell = (g.position >= gp.a && g.position <= gp.a * std::exp(e) * (1 + 1e-15)) ||
                            (g.position >= gp.b * std::exp(-e) * (1 - 1e-15) && g.position <= gp.b);
      EXPECT_TRUE(in_shell) << g.position;
    }
  }
}

TEST(RunG, GeometricMeanExit) {
  GExitProblem gp;
  gp.coeffs = GCoefficientSet::constant(0.5, 0.0, 1.0);
  const auto samples = sample_many([&gp](Rng& rng) { return run_g(gp, rng); }, 20000, 12);
  double sum = 0.0;
  for (const auto& s : samples) sum += s.time;
  const double target = std::log(2.0) * std::log(2.0);
  EXPECT_NEAR(sum / samples.size(), target, 0.02 * target);
}

}  // namespace
}  // namespace exitwalk
