#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "exitwalk/errors.hpp"
#include "exitwalk/euler.hpp"
#include "exitwalk/harness.hpp"
#include "exitwalk/presets.hpp"
#include "exitwalk/woms.hpp"

namespace exitwalk {
namespace {

const double kInvSqrtE = 1.0 / std::sqrt(std::numbers::e);

ExitProblem bm_problem(double eps = 1e-2) {
  ExitProblem p{presets::brownian()};
  p.eps = eps;
  return p;
}

ExitProblem sinusoidal_problem() {
  ExitProblem p{presets::sinusoidal()};
  p.a = -1.0;
  p.b = 2.0;
  p.x0 = 1.0;
  p.m = presets::sinusoidal_m(p.a, p.b);
  return p;
}

TEST(ExitProblem, Validation) {
  ExitProblem p = bm_problem();
  EXPECT_NO_THROW(p.validate());
  p.eps = 1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = bm_problem();
  p.gamma_shell = 1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = bm_problem();
  p.m = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = bm_problem();
  p.x0 = 1.5;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(ShrunkenBounds, Examples) {
  ExitProblem p = bm_problem();
  p.gamma_shell = 0.5;
  const Bounds s = shrunken_bounds(p, 0.0);
  EXPECT_EQ(s.lower, -0.5);
  EXPECT_EQ(s.upper, 0.5);
  p.gamma_shell = 1e-300;
  EXPECT_EQ(shrunken_bounds(p, 0.3).lower, -1.0);
  EXPECT_EQ(shrunken_bounds(p, 0.3).upper, 1.0);
  p.gamma_shell = 0.25;
  const Bounds at_a = shrunken_bounds(p, p.a);
  EXPECT_EQ(at_a.lower, p.a);
  EXPECT_EQ(at_a.upper, p.b - 0.25 * (p.b - p.a));
}

TEST(ShrunkenBounds, StrictlyInside) {
  ExitProblem p = bm_problem();
  p.gamma_shell = 0.3;
  for (int i = 1; i < 100; ++i) {
    const double x = -1.0 + 2.0 * i / 100.0;
    const Bounds s = shrunken_bounds(p, x);
    EXPECT_LT(p.a, s.lower);
    EXPECT_LE(s.lower, x);
    EXPECT_LE(x, s.upper);
    EXPECT_LT(s.upper, p.b);
  }
}

TEST(DeltaM, Brownian) { EXPECT_EQ(delta_m(bm_problem(), 0.7, 0.2), kInvSqrtE); }

TEST(DeltaM, UnitDrift) {
  ExitProblem p{CoefficientSet([](double) { return 0.0; }, [](double) { return 1.0; },
                               [](double) { return 1.0; }, 1.0)};
  p.m = 1.0;
  for (double t0 : {0.0, 2.5, 10.0}) EXPECT_NEAR(delta_m(p, t0, 0.1), kInvSqrtE + 1.0, 1e-12);
}

TEST(DeltaM, SinusoidalClosedBound) {
  const double m = presets::sinusoidal_m(3.0, 5.0);
  EXPECT_NEAR(m, 0.0821, 5e-5);
  const double delta = presets::sinusoidal_delta(3.0, 5.0, m);
  EXPECT_NEAR(delta, 1.5 * (kInvSqrtE + 6.0 * std::sqrt(m)), 1e-15);
  EXPECT_NEAR(delta, 3.489, 5e-4);
  ExitProblem p{presets::sinusoidal()};
  p.a = 3.0;
  p.b = 5.0;
  p.x0 = 4.0;
  p.m = m;
  EXPECT_EQ(delta_m(p, 0.4, 4.0), delta);
}

TEST(DeltaM, SinusoidalHorizonBalancesInterval) {
  // The m formula is the root of 2 Delta_m sqrt(m) = b - a.
  for (auto [a, b] : {std::pair{-1.0, 2.0}, std::pair{3.0, 5.0}, std::pair{-0.5, 0.5}}) {
    const double m = presets::sinusoidal_m(a, b);
    EXPECT_NEAR(2.0 * presets::sinusoidal_delta(a, b, m) * std::sqrt(m), b - a, 1e-12 * (b - a));
  }
  EXPECT_NEAR(presets::sinusoidal_m(-1.0, 2.0), 0.235268, 1e-6);
}

TEST(DeltaM, SinusoidalClosedBoundDominatesGeneric) {
  const ExitProblem closed = sinusoidal_problem();
  ExitProblem generic = closed;
  generic.coeffs = closed.coeffs.without_closed_forms();
  for (int i = 0; i < 20; ++i) {
    const double t0 = 0.33 * i;
    for (double x0 : {-0.9, 0.0, 1.0, 1.9}) {
      EXPECT_GE(delta_m(closed, t0, x0), delta_m(generic, t0, x0)) << t0 << " " << x0;
    }
  }
}

TEST(SpheroidScale, BrownianBranches) {
  ExitProblem p = bm_problem();
  p.gamma_shell = 1e-15;
  p.m = std::numbers::e;
  EXPECT_NEAR(spheroid_scale(p, 0.0, 0.0), std::sqrt(std::numbers::e), 1e-11);
  p.m = 1.0;
  EXPECT_NEAR(spheroid_scale(p, 0.0, 0.0), 1.0, 1e-11);
  EXPECT_THROW(spheroid_scale(p, 0.0, 1.0), DomainError);
}

TEST(SpheroidScale, MidpointSymmetric) {
  ExitProblem p = bm_problem();
  p.a = 2.0;
  p.b = 6.0;
  p.x0 = 4.0;
  const double d = spheroid_scale(p, 0.0, 4.0);
  const Bounds s = shrunken_bounds(p, 4.0);
  EXPECT_DOUBLE_EQ(s.upper - 4.0, 4.0 - s.lower);
  const double delta = delta_m(p, 0.0, 4.0);
  for (double room : {s.upper - 4.0, 4.0 - s.lower}) {
    const double kappa = delta * std::sqrt(p.m) / room;
    EXPECT_DOUBLE_EQ(d, std::min(1.0, kappa) / delta * room * (1.0 - 1e-12));
  }
}

TEST(SpheroidScale, SatisfiesConstraints) {
  for (const ExitProblem& p : {bm_problem(), sinusoidal_problem()}) {
    for (int i = 1; i < 20; ++i) {
      const double x0 = p.a + (p.b - p.a) * i / 20.0;
      const double d = spheroid_scale(p, 0.5, x0);
      const Bounds s = shrunken_bounds(p, x0);
      const double delta = delta_m(p, 0.5, x0);
      EXPECT_LE(d * delta, std::min(s.upper - x0, x0 - s.lower) * (1 + 1e-12));
      EXPECT_LE(d * d, p.coeffs.rho_increment(0.5, 0.5 + p.m) * (1 + 1e-12));
    }
  }
}

TEST(PsiL, AnchoredAtStart) {
  for (const ExitProblem& p : {bm_problem(), sinusoidal_problem()}) {
    const Bounds b = psi_L(p, 0.0, 0.3, 0.4, 0.2);
    EXPECT_EQ(b.lower, 0.4);
    EXPECT_EQ(b.upper, 0.4);
  }
}

TEST(PsiL, BrownianReducesToHeatBall) {
  const ExitProblem p = bm_problem();
  const Spheroid s(0.9);
  for (int i = 0; i <= 50; ++i) {
    const double t = 0.81 * i / 50.0;
    const Bounds l = psi_L(p, t, 0.0, 0.0, 0.9);
    const Bounds h = s.boundary(std::min(t, s.support()));
    EXPECT_EQ(l.lower, h.lower);
    EXPECT_EQ(l.upper, h.upper);
  }
}

TEST(PsiL, SinusoidalMatchesClosedForm) {
  ExitProblem p = sinusoidal_problem();
  p.coeffs = p.coeffs.without_closed_forms();
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int k = 0; k < 10; ++k) {
      const double t0 = 0.9 * i;
      const double x0 = -0.8 + 2.6 * k / 9.0;
      const double d = spheroid_scale(sinusoidal_problem(), t0, x0);
      const double life = spheroid_lifetime(p, t0, d);
      for (int j = 0; j < 10; ++j) {
        const double t = life * j / 9.0;
        const Bounds g = psi_L(p, t, t0, x0, d);
        const Bounds c = presets::sinusoidal_boundary(t, t0, x0, d);
        worst = std::max({worst, std::abs(g.lower - c.lower), std::abs(g.upper - c.upper)});
      }
    }
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(PsiL, BeyondSupport) {
  const ExitProblem p = bm_problem();
  EXPECT_THROW(psi_L(p, 0.5, 0.0, 0.0, 0.5), DomainError);
}

TEST(Step, BrownianReduction) {
  const ExitProblem p = bm_problem();
  const double d = 0.4, tau = 0.05;
  const StepResult up = step_from_exit(p, 1.0, 0.2, d, {tau, Side::upper});
  const StepResult lo = step_from_exit(p, 1.0, 0.2, d, {tau, Side::lower});
  const double psi = std::sqrt(tau * std::log(d * d / tau));
  EXPECT_DOUBLE_EQ(up.time, 1.05);
  EXPECT_DOUBLE_EQ(up.position, 0.2 + psi);
  EXPECT_DOUBLE_EQ(lo.position, 0.2 - psi);
}

TEST(Step, SinusoidalTimeIsQuarter) {
  const ExitProblem p = sinusoidal_problem();
  const double t = 0.7, x = 0.5;
  const double d = spheroid_scale(p, t, x);
  for (double frac : {0.1, 0.5, 0.99}) {
    const double tau = frac * d * d;
    const StepResult s = step_from_exit(p, t, x, d, {tau, Side::upper});
    EXPECT_NEAR(s.time - t, tau / 4.0, 1e-15);
  }
}

TEST(Step, ClosingTipCarriesOnlyDrift) {
  for (const ExitProblem& p : {bm_problem(), sinusoidal_problem()}) {
    const double t = 0.3, x = 0.4;
    const double d = spheroid_scale(p, t, x);
    const StepResult s = step_from_exit(p, t, x, d, exit_from_draws(Spheroid(d), 1.0, 0.0, Side::upper));
    const CoefficientSet& cs = p.coeffs;
    const double expect = cs.c(s.time) + (x - cs.c(t)) * std::exp(cs.alpha_integral(t, s.time));
    EXPECT_NEAR(s.position, expect, 1e-12);
  }
}

TEST(Step, RejectsShellStart) {
  const ExitProblem p = bm_problem();
  Rng rng(1);
  EXPECT_THROW(step(p, 0.0, 0.995, rng), DomainError);
}

TEST(Run, DegenerateStart) {
  ExitProblem p = bm_problem();
  p.x0 = 0.995;
  p.t0 = 2.0;
  Rng rng(1);
  const WalkResult r = run(p, rng);
  EXPECT_EQ(r.sample.steps, 0u);
  EXPECT_EQ(r.sample.time, 2.0);
  EXPECT_EQ(r.sample.position, 0.995);
  EXPECT_EQ(r.sample.side, Side::upper);
}

// Property: every executed spheroid stays in the shrunken interval, time
// strictly increases and the walk ends in the stopping shell.
TEST(Run, ContainmentAndMonotonicity) {
  ExitProblem ou{presets::ornstein_uhlenbeck(1.5, 0.3, 0.8)};
  ou.a = -0.5;
  ou.b = 1.2;
  ou.x0 = 0.1;
  ExitProblem cst{presets::constant(-1.0, 0.5, 1.0)};
  ExitProblem growing{presets::constant(0.4, -0.3, 1.2).without_closed_forms()};
  ExitProblem sin_quad = sinusoidal_problem();
  sin_quad.coeffs = sin_quad.coeffs.without_closed_forms();
  for (const ExitProblem& p : {bm_problem(), sinusoidal_problem(), ou, cst, growing, sin_quad}) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      Rng rng(seed);
      const WalkResult r = run(p, rng);
      const auto& nodes = r.skeleton.nodes;
      ASSERT_EQ(nodes.size(), r.sample.steps + 1);
      EXPECT_EQ(nodes.front().time, p.t0);
      EXPECT_EQ(nodes.front().position, p.x0);
      for (std::size_t n = 0; n + 1 < nodes.size(); ++n) {
        const WalkNode& at = nodes[n];
        EXPECT_GT(nodes[n + 1].time, at.time);
        const Bounds shell = shrunken_bounds(p, at.position);
        const double life = spheroid_lifetime(p, at.time, at.scale);
        const double slack = 1e-9 * (p.b - p.a);
        for (int j = 0; j < 256; ++j) {
          const Bounds psi = psi_L(p, life * j / 255.0, at.time, at.position, at.scale);
          EXPECT_GE(psi.lower, shell.lower - slack);
          EXPECT_LE(psi.upper, shell.upper + slack);
        }
        EXPECT_GE(nodes[n + 1].position, shell.lower - slack);
        EXPECT_LE(nodes[n + 1].position, shell.upper + slack);
      }
      const double x = r.sample.position;
      EXPECT_TRUE((x >= p.a && x <= p.a + p.eps) || (x >= p.b - p.eps && x <= p.b)) << x;
    }
  }
}

// Independent walk-on-spheroids for Brownian motion, written directly from
// the heat-ball primitives.
std::vector<WalkNode> reference_brownian_walk(const ExitProblem& p, Rng& rng) {
  std::vector<WalkNode> nodes{{p.t0, p.x0, 0.0}};
  double t = p.t0, x = p.x0;
  const double delta = 1.0 / std::sqrt(std::numbers::e);
  while (x < p.b - p.eps && x > p.a + p.eps) {
    const double lo = p.a + p.gamma_shell * (x - p.a);
    const double hi = p.b - p.gamma_shell * (p.b - x);
    const double room = (p.b - x <= x - p.a) ? hi - x : x - lo;
    const double kappa = delta * std::sqrt((t + p.m) - t) / room;
    const double d = std::min(1.0, kappa) / delta * room * (1.0 - 1e-12);
    const double u = rng.uniform();
    const double g = rng.normal();
    const bool lower = rng.coin();
    const double tau = d * d * (u * u) * std::exp(-g * g);
    const double psi = tau == d * d ? 0.0 : std::sqrt(tau * std::log(d * d / tau));
    nodes.back().scale = d;
    t = t + tau;
    x = x + (lower ? -psi : psi);
    nodes.push_back({t, x, 0.0});
  }
  return nodes;
}

TEST(Run, BrownianBitIdenticalToReference) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    ExitProblem p = bm_problem(1e-3);
    p.m = seed % 2 ? 1.0 : 0.3;
    p.x0 = 0.37;
    Rng a(seed), b(seed);
    const WalkResult r = run(p, a);
    const auto ref = reference_brownian_walk(p, b);
    ASSERT_EQ(r.skeleton.nodes.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_EQ(r.skeleton.nodes[i].time, ref[i].time);
      EXPECT_EQ(r.skeleton.nodes[i].position, ref[i].position);
      EXPECT_EQ(r.skeleton.nodes[i].scale, ref[i].scale);
    }
  }
}

TEST(Run, Deterministic) {
  const ExitProblem p = sinusoidal_problem();
  Rng a(11), b(11);
  const WalkResult r1 = run(p, a);
  const WalkResult r2 = run(p, b);
  EXPECT_EQ(r1.sample.time, r2.sample.time);
  EXPECT_EQ(r1.sample.position, r2.sample.position);
  EXPECT_EQ(r1.sample.steps, r2.sample.steps);
  ASSERT_EQ(r1.skeleton.nodes.size(), r2.skeleton.nodes.size());
  for (std::size_t i = 0; i < r1.skeleton.nodes.size(); ++i) {
    EXPECT_EQ(r1.skeleton.nodes[i].time, r2.skeleton.nodes[i].time);
    EXPECT_EQ(r1.skeleton.nodes[i].position, r2.skeleton.nodes[i].position);
  }
}

TEST(Run, BrownianMeanAndSymmetry) {
  const ExitProblem p = bm_problem(1e-3);
  const auto samples = sample_many([&p](Rng& rng) { return run(p, rng, false).sample; }, 20000, 4);
  double sum = 0.0;
  std::size_t upper = 0;
  for (const auto& s : samples) {
    sum += s.time;
    upper += s.side == Side::upper;
  }
  // Analytic mean (b - x0)(x0 - a) = 1.
  EXPECT_NEAR(sum / samples.size(), 1.0, 0.02);
  EXPECT_NEAR(upper / 20000.0, 0.5, 3.0 * std::sqrt(0.25 / 20000));
}

TEST(Run, MaxStepGuard) {
  ExitProblem p = bm_problem(1e-6);
  p.max_steps = 2;
  Rng rng(3);
  EXPECT_THROW(run(p, rng), NumericError);
}

TEST(RunCapped, HugeCapMatchesRun) {
  const ExitProblem p = sinusoidal_problem();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng a(seed), b(seed);
    const WalkResult r = run(p, a);
    const WalkResult c = run_capped(p, 1e300, b);
    EXPECT_EQ(r.sample.time, c.sample.time);
    EXPECT_EQ(r.sample.position, c.sample.position);
    EXPECT_EQ(r.sample.steps, c.sample.steps);
    EXPECT_FALSE(c.sample.censored);
  }
}

TEST(RunCapped, ImmediateCap) {
  ExitProblem p = bm_problem();
  p.t0 = 1.0;
  Rng rng(8);
  const WalkResult r = run_capped(p, 1.0 + 1e-300 + 1e-15, rng);
  EXPECT_TRUE(r.sample.censored);
  EXPECT_LE(r.sample.steps, 1u);
  EXPECT_EQ(r.sample.position, p.x0);
  EXPECT_THROW(run_capped(p, 1.0, rng), ConfigError);
}

TEST(RunCapped, CensoringMatchesEuler) {
  const ExitProblem p = bm_problem();
  const std::size_t n = 20000;
  const auto walk = sample_many([&p](Rng& rng) { return run_capped(p, 0.1, rng, false).sample; }, n, 21);
  const EulerConfig cfg{1e-4, true, 0.1};
  const auto oracle = replicate<EulerExit>(
      [&p, &cfg](Rng& rng) { return euler_exit(p.coeffs, p.a, p.b, p.x0, cfg, rng); }, n, 22);
  double walk_cens = 0.0, oracle_cens = 0.0;
  for (const auto& s : walk) walk_cens += s.censored;
  for (const auto& e : oracle) oracle_cens += e.censored;
  EXPECT_NEAR(walk_cens / n, oracle_cens / n, 0.02);
}

TEST(Diagnostics, Presets) {
  const Diagnostics bm = validate(bm_problem(), 3.0);
  EXPECT_EQ(bm.min_sigma, 1.0);
  EXPECT_EQ(bm.max_abs_alpha, 0.0);
  EXPECT_EQ(bm.max_abs_beta, 0.0);
  EXPECT_TRUE(bm.warnings.empty());
  const Diagnostics sn = validate(sinusoidal_problem(), 2.0 * std::numbers::pi);
  EXPECT_NEAR(sn.min_sigma, 1.0, 1e-12);
  EXPECT_NEAR(sn.max_abs_beta, 1.0, 1e-12);
  EXPECT_TRUE(sn.warnings.empty());
}

TEST(Diagnostics, SigmaZeroWarns) {
  ExitProblem p{CoefficientSet([](double) { return 0.0; }, [](double) { return 0.0; },
                               [](double t) { return std::abs(1.0 - t); }, 0.1)};
  const Diagnostics d = validate(p, 2.0);
  EXPECT_FALSE(d.warnings.empty());
  EXPECT_NEAR(d.min_sigma, 0.0, 1e-9);
}

}  // namespace
}  // namespace exitwalk
