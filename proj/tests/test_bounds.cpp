#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bounds_oracle.hpp"
#include "oracles.hpp"
#include "thinfilm/bounds.hpp"

using namespace thinfilm;

namespace {
TheoremConstants base(double pm, double pp) {
  TheoremConstants c;
  c.p_minus = pm;
  c.p_plus = pp;
  c.omega_measure = 1.0;
  c.lambda1 = 1.0;
  c.B2_sq = 1.0;
  c.k0 = 1.0;
  return c;
}
}  // namespace

TEST(LowEnergyBound, HandExample) {
  const TheoremConstants c = base(3.0, 3.0);
  const auto b = blowup_upper_bound_T(c, -1.0, 2.0);
  EXPECT_NEAR(b.C0, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(b.C1, std::pow(1.0 / 3.0, 2.0 / 3.0), 1e-15);
  const auto o = oracle::low_energy(3, 3, 1, 1, 1, -1, 2, 0);
  EXPECT_LT(oracle::rel_err(b.C2, o.C2), 1e-12);
  EXPECT_LT(oracle::rel_err(b.C3, o.C3), 1e-12);
  EXPECT_LT(oracle::rel_err(b.T, o.T), 1e-12);
}

TEST(LowEnergyBound, FinalFactorScaling) {
  // T = 2/(C3 (p-2)) F10^{1-p/2}: doubling F10 at fixed C3 scales by 2^{-1/2}.
  const TheoremConstants c = base(3.0, 3.0);
  const auto b = blowup_upper_bound_T(c, -1.0, 2.0);
  EXPECT_NEAR(2.0 / (b.C3 * 1.0) * std::pow(4.0, -0.5) / b.T, std::pow(2.0, -0.5), 1e-14);
}

TEST(LowEnergyBound, DepthBranchDivergesAtThreshold) {
  const TheoremConstants c = base(3.0, 3.5);
  double prev = 0.0;
  for (double gap : {1e-1, 1e-3, 1e-6}) {
    const auto b = blowup_upper_bound_T(c, 1.0 - gap, 0.5, 1.0);
    EXPECT_TRUE(b.used_depth);
    EXPECT_GT(b.T, prev);
    prev = b.T;
  }
  EXPECT_GT(prev, 1e3);
}

TEST(LowEnergyBound, HypothesisViolations) {
  const TheoremConstants c = base(3.0, 3.0);
  auto kind = [&](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::invalid_argument;
  };
  EXPECT_EQ(kind([&] { blowup_upper_bound_T(c, 0.5, 1.0); }), ErrorKind::hypothesis_violated);
  EXPECT_EQ(kind([&] { blowup_upper_bound_T(c, 2.0, 1.0, 1.0); }), ErrorKind::hypothesis_violated);
  EXPECT_EQ(kind([&] { blowup_upper_bound_T(c, -1.0, 0.0); }), ErrorKind::hypothesis_violated);
}

TEST(HighEnergyBound, ArithmeticExample) {
  const auto b = blowup_upper_bound_high_energy(base(3.0, 3.0), 0.5, 6.0);
  EXPECT_NEAR(b.denominator, 3.0, 1e-14);
  EXPECT_NEAR(b.T, 32.0, 1e-13);
}

TEST(HighEnergyBound, Limits) {
  const TheoremConstants c = base(3.5, 4.0);
  const double u0 = 2.0;
  const double limit = 8 * 2.5 * u0 / (std::pow(1.5, 3) * c.B2_sq * u0);
  EXPECT_NEAR(blowup_upper_bound_high_energy(c, 1e-12, u0).T, limit, 1e-9);
  const double thr = 1.5 / 7.0 * u0;
  EXPECT_GT(blowup_upper_bound_high_energy(c, thr * (1 - 1e-9), u0).T, 1e8);
  EXPECT_THROW(blowup_upper_bound_high_energy(c, thr, u0), Error);
  EXPECT_THROW(blowup_upper_bound_high_energy(c, -0.1, u0), Error);
}

TEST(Lifespan, ExponentArithmetic) {
  EXPECT_DOUBLE_EQ(lifespan_exponent(2, 2.5), 2.0);
  EXPECT_GT(lifespan_exponent(2, 2.01), 1.0);
}

TEST(Lifespan, ClosedFormEqualExponents) {
  TheoremConstants c = base(2.6, 2.6);
  c.C3_tilde = 0.7;
  c.C4_tilde = 1.3;
  c.kappa_star = 2.0;
  const double a = 0.8;
  const auto b = lifespan_lower_bound(c, 2, a);
  const double r = b.r_plus;
  const double expect = std::pow(a, 1 - r) / ((b.C4 + b.C5) * (r - 1));
  EXPECT_LT(oracle::rel_err(b.T, expect), 1e-8);
}

TEST(Lifespan, DoublingConstantsHalvesBound) {
  TheoremConstants c = base(2.3, 2.8);
  c.C3_tilde = 0.5;
  c.C4_tilde = 0.9;
  c.kappa_star = 1.5;
  const auto b = lifespan_lower_bound(c, 2, 1.2);
  // Double C4 and C5 by scaling the base of each power.
  TheoremConstants d = c;
  d.C3_tilde = *c.C3_tilde * std::pow(2.0, (12.0 - 4.0 * 2.8) / 4.0);
  d.C4_tilde = *c.C4_tilde * std::pow(2.0, (12.0 - 4.0 * 2.3) / 4.0);
  const auto e = lifespan_lower_bound(d, 2, 1.2);
  EXPECT_NEAR(e.C4 / b.C4, 2.0, 1e-12);
  EXPECT_NEAR(e.C5 / b.C5, 2.0, 1e-12);
  EXPECT_LT(oracle::rel_err(e.T, 0.5 * b.T), 1e-10);
}

TEST(Lifespan, MatchesIndependentQuadrature) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double pm = 2.05 + 0.8 * u(rng);
    const double pp = pm + (2.95 - pm) * u(rng);
    TheoremConstants c = base(pm, pp);
    c.C3_tilde = 0.2 + u(rng);
    c.C4_tilde = 0.2 + u(rng);
    c.kappa_star = 0.5 + u(rng);
    const double a = 0.1 + 2 * u(rng);
    const auto b = lifespan_lower_bound(c, 2, a);
    const auto o = oracle::lifespan_constants(pm, pp, 2, *c.C3_tilde, *c.C4_tilde, *c.kappa_star);
    EXPECT_LT(oracle::rel_err(b.C4, o.C4), 1e-12);
    EXPECT_LT(oracle::rel_err(b.C5, o.C5), 1e-12);
    EXPECT_LT(oracle::rel_err(b.T, oracle::lifespan_integral(o, a)), 1e-8);
  }
}

TEST(Lifespan, HypothesisViolations) {
  TheoremConstants c = base(3.0, 3.0);
  c.C3_tilde = c.C4_tilde = c.kappa_star = 1.0;
  EXPECT_THROW(lifespan_lower_bound(c, 2, 1.0), Error);  // p+ >= 3 when N = 2
  TheoremConstants d = base(2.5, 2.5);
  EXPECT_THROW(lifespan_lower_bound(d, 2, 1.0), Error);  // missing constants
}

TEST(DecayRate, ArithmeticAndLimits) {
  const TheoremConstants c = base(3.0, 3.0);
  // delta0 = (J0/d)^{1/2} = 1/4 with J0/d = 1/16.
  const auto r = decay_rate_delta1(c, 1.0 / 16.0, 1.0);
  EXPECT_NEAR(r.delta0, 0.25, 1e-15);
  EXPECT_NEAR(r.delta1, 0.15, 1e-15);
  EXPECT_NEAR(decay_rate_delta1(c, 1e-14, 1.0).delta1, 1.0 / 6.0, 1e-6);
  EXPECT_NEAR(decay_rate_delta1(c, 1.0 - 1e-12, 1.0).delta1, 0.0, 1e-6);
  EXPECT_THROW(decay_rate_delta1(c, 1.0, 1.0), Error);
  EXPECT_THROW(decay_rate_delta1(c, -1.0, 1.0), Error);
}

TEST(Constants, FromGrid) {
  const Grid2D g(10.0, 5.0, 20, 10);
  const auto p = ExponentField::sample(g, [](double x, double) { return 2.5 + 0.1 * x; });
  const auto c = theorem_constants(g, p, CoefficientSchedule::constant(3.0), -0.2, 0.7);
  EXPECT_NEAR(c.lambda1, std::pow(M_PI / 10, 2) + std::pow(M_PI / 5, 2), 1e-15);
  EXPECT_DOUBLE_EQ(c.omega_measure, 50.0);
  EXPECT_DOUBLE_EQ(c.k0, 3.0);
  EXPECT_DOUBLE_EQ(c.p_minus, 2.5);
  const double lam = c.lambda1;
  EXPECT_NEAR(c.B2_sq, lam + lam * lam - 0.2 * std::pow(lam, 1.4), 1e-14);
}
