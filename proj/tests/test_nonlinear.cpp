#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "thinfilm/nonlinear.hpp"

using namespace thinfilm;


TEST(Nonlinear, MatchesFluxFormOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const Grid2D g(3.0 + trial, 2.0, 7 + trial, 5 + trial);
    const Field u = oracle::random_field(g, rng);
    const auto p = ExponentField::sample(g, [&](double x, double y) { return 2.2 + 0.3 * x / g.lx() + y / g.ly(); });
    const Field b = nonlinear_divergence(u, p);
    const auto ref = oracle::flux_divergence(u, p);
    for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(b.values()[k], ref[k], 1e-12 * (1 + std::abs(ref[k])));
  }
}

TEST(Nonlinear, ExponentTwoGivesFivePointLaplacian) {
  std::mt19937_64 rng(1);
  const Grid2D g(1.0, 1.0, 6, 6);
  const Field u = oracle::random_field(g, rng);
  const auto p = ExponentField::unchecked(NodeArray(g, 2.0));
  const Field b = nonlinear_divergence(u, p);
  const double h2 = g.dx() * g.dx();
  for (int j = 1; j <= 6; ++j)
    for (int i = 1; i <= 6; ++i) {
      const double lap = (u(i + 1, j) + u(i - 1, j) + u(i, j + 1) + u(i, j - 1) - 4 * u(i, j)) / h2;
      EXPECT_NEAR(b.values()[g.interior_index(i, j)], lap, 1e-10);
    }
}

TEST(Nonlinear, ZeroFieldAndOddSymmetry) {
  std::mt19937_64 rng(2);
  const Grid2D g(2.0, 2.0, 8, 8);
  const auto p = ExponentField::constant(g, 3.3);
  const Field z(g);
  const Field bz = nonlinear_divergence(z, p);
  for (double v : bz.values()) EXPECT_EQ(v, 0.0);
  const Field u = oracle::random_field(g, rng);
  const Field a = nonlinear_divergence(u, p), b = nonlinear_divergence(-1.0 * u, p);
  for (std::size_t k = 0; k < a.values().size(); ++k) EXPECT_NEAR(a.values()[k], -b.values()[k], 1e-13);
}

TEST(Nonlinear, Homogeneity) {
  // Constant q: B(mu u) = mu^{q-1} B(u).
  std::mt19937_64 rng(3);
  const Grid2D g(2.0, 2.0, 8, 8);
  const auto p = ExponentField::constant(g, 3.5);
  const Field u = oracle::random_field(g, rng);
  const Field a = nonlinear_divergence(2.0 * u, p), b = nonlinear_divergence(u, p);
  for (std::size_t k = 0; k < a.values().size(); ++k)
    EXPECT_NEAR(a.values()[k], std::pow(2.0, 2.5) * b.values()[k], 1e-11 * (1 + std::abs(a.values()[k])));
}

TEST(Nonlinear, DivergedCoefficientIsReported) {
  const Grid2D g(1.0, 1.0, 4, 4);
  Field u(g);
  u.interior(2, 2) = 1e200;
  try {
    (void)nonlinear_divergence(u, ExponentField::constant(g, 3.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::diverged_coefficient);
  }
}

TEST(Threshold, ClosedForm) {
  const Grid2D g(1.0, 1.0, 3, 3);
  const NodeArray t = threshold_map(4.0, ExponentField::constant(g, 3.0));
  EXPECT_NEAR(t(1, 1), 0.25, 1e-15);
  const NodeArray t2 = threshold_map(0.1, ExponentField::constant(g, 2.5));
  EXPECT_NEAR(t2(2, 2), 100.0, 1e-10);
  // Below the threshold the effective diffusivity 1 - k|grad u|^{p-2} is positive.
  EXPECT_GT(1.0 - 0.1 * std::pow(99.0, 0.5), 0.0);
  EXPECT_LT(1.0 - 0.1 * std::pow(101.0, 0.5), 0.0);
}

TEST(Threshold, Errors) {
  const Grid2D g(1.0, 1.0, 3, 3);
  EXPECT_THROW(threshold_map(0.0, ExponentField::constant(g, 3.0)), Error);
  try {
    (void)threshold_map(1.0, ExponentField::unchecked(NodeArray(g, 2.0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_exponent);
  }
}
