#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "thinfilm/evolve.hpp"
#include "thinfilm/presets.hpp"

using namespace thinfilm;

namespace {
SimulationConfig small_config(const Grid2D& g, double k, double alpha, double dt, double t_end) {
  SimulationConfig c(ExponentField::constant(g, 3.0), CoefficientSchedule::constant(k));
  c.alpha = alpha;
  c.s = 0.6;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

Field mode(const Grid2D& g, int m, int l) {
  const double pi = std::numbers::pi;
  return Field::sample(g, [&](double x, double y) { return std::sin(pi * m * x / g.lx()) * std::sin(pi * l * y / g.ly()); });
}
}  // namespace

TEST(Step, ZeroIsFixedPoint) {
  const Grid2D g(4.0, 4.0, 10, 10);
  SimulationConfig c = small_config(g, 5.0, -0.3, 0.01, 0.1);
  c.source_lambda = -1.0;
  const Field u = step(Field(g), 0.0, c);
  for (double v : u.values()) EXPECT_EQ(v, 0.0);
}

TEST(Step, LinearModeDecays) {
  const Grid2D g(4.0, 4.0, 10, 10);
  const SimulationConfig c = small_config(g, 1e-300, 0.4, 0.01, 0.1);
  const Field u = mode(g, 2, 1);
  const Field w = step(u, 0.0, c);
  const double lam = mode_eigenvalue(g, 2, 1);
  const double factor = 1.0 / (1.0 + 0.01 * (lam * lam + 0.4 * std::pow(lam, 1.2) + lam));
  EXPECT_LT(factor, 1.0);
  for (std::size_t k = 0; k < u.values().size(); ++k) EXPECT_NEAR(w.values()[k], factor * u.values()[k], 1e-14);
}

TEST(Step, MatchesDirectTransformReference) {
  Problem pr = example1(20);
  const Field& u = pr.u0;
  const Grid2D& g = u.grid();
  const SimulationConfig& c = pr.cfg;
  const Field w = step(u, 0.0, c);

  const auto b = oracle::flux_divergence(u, c.p);
  std::vector<double> rhs(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) rhs[k] = u.values()[k] - c.dt * 10.0 * b[k];
  auto v = oracle::dst_direct(rhs, 20, 20);
  const double pi = std::numbers::pi;
  for (int l = 1; l <= 20; ++l)
    for (int m = 1; m <= 20; ++m) {
      const double lam = std::pow(pi * m / 10.0, 2) + std::pow(pi * l / 10.0, 2);
      v[(l - 1) * 20 + (m - 1)] /= 1.0 + c.dt * (lam * lam - 0.95 * std::pow(lam, 1.8) + lam);
    }
  const auto ref = oracle::idst_direct(v, 20, 20);
  double err = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    err = std::max(err, std::abs(w.values()[k] - ref[k]));
    scale = std::max(scale, std::abs(ref[k]));
  }
  EXPECT_LT(err / scale, 1e-10);
  EXPECT_TRUE(g == c.grid());
}

TEST(Step, SourceTermIsExplicitByDefault) {
  const Grid2D g(4.0, 4.0, 10, 10);
  SimulationConfig c = small_config(g, 1e-300, 0.0, 0.01, 0.1);
  c.source_lambda = 3.0;
  const Field u = mode(g, 1, 1);
  const double lam = mode_eigenvalue(g, 1, 1);
  const double d = 1.0 + 0.01 * (lam * lam + lam);
  EXPECT_NEAR(step(u, 0.0, c).values()[5], (1.0 + 0.03) / d * u.values()[5], 1e-14);
  c.implicit_source = true;
  EXPECT_NEAR(step(u, 0.0, c).values()[5], u.values()[5] / (d - 0.03), 1e-14);
}

TEST(Run, LinearRegimeIsContractive) {
  std::mt19937_64 rng(3);
  const Grid2D g(5.0, 5.0, 16, 16);
  const SimulationConfig c = small_config(g, 1e-300, 0.2, 0.01, 0.5);
  const SimulationOutcome o = run(oracle::random_field(g, rng), c);
  ASSERT_EQ(o.status, RunStatus::completed);
  ASSERT_EQ(o.reports.size(), 51u);
  for (std::size_t n = 1; n < o.reports.size(); ++n) EXPECT_LE(o.reports[n].F1, o.reports[n - 1].F1);
}

TEST(Run, ZeroDataHasZeroResidual) {
  const Grid2D g(5.0, 5.0, 8, 8);
  const SimulationOutcome o = run(Field(g), small_config(g, 1.0, 0.0, 0.1, 1.0));
  EXPECT_EQ(o.status, RunStatus::completed);
  EXPECT_EQ(o.conservation_residual_max, 0.0);
  EXPECT_EQ(o.nehari_residual_max, 0.0);
  for (const auto& r : o.reports) EXPECT_EQ(r.F1, 0.0);
}

TEST(Run, IsBitDeterministic) {
  Problem pr = example1(24);
  pr.cfg.t_end = 0.01;
  const SimulationOutcome a = run(pr.u0, pr.cfg), b = run(pr.u0, pr.cfg);
  ASSERT_EQ(a.reports.size(), b.reports.size());
  std::ostringstream sa, sb;
  write_reports_csv(sa, a.reports);
  write_reports_csv(sb, b.reports);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(Run, StrideAndSnapshots) {
  std::mt19937_64 rng(5);
  const Grid2D g(5.0, 5.0, 8, 8);
  SimulationConfig c = small_config(g, 0.1, 0.0, 0.1, 1.0);
  c.report_stride = 3;
  c.snapshot_times = {0.0, 0.5};
  const SimulationOutcome o = run(oracle::smooth_random_field(g, rng, 0.1), c);
  // t = 0, 0.3, 0.6, 0.9 and the final step.
  ASSERT_EQ(o.reports.size(), 5u);
  EXPECT_NEAR(o.reports.back().t, 1.0, 1e-12);
  ASSERT_EQ(o.snapshots.size(), 2u);
  EXPECT_EQ(o.snapshots[1].t, 0.5);
}

TEST(Run, IndefiniteDenominatorStatus) {
  const Grid2D g(10.0, 10.0, 8, 8);
  const SimulationOutcome o = run(Field(g), small_config(g, 1.0, -50.0, 1.0, 1.0));
  EXPECT_EQ(o.status, RunStatus::indefinite_denominator);
}

TEST(Run, CsvHeader) {
  std::ostringstream os;
  write_reports_csv(os, {FunctionalReport{}});
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t,J,I,norm_alpha_sq,F1,modular,weighted_modular,umax");
}

TEST(Run, ExampleOneBlowsUpWithGrowingEnergyBeforeDetection) {
  const Problem pr = example1();
  const SimulationOutcome o = run(pr.u0, pr.cfg);
  ASSERT_EQ(o.status, RunStatus::blew_up);
  ASSERT_TRUE(o.blowup_time_estimate.has_value());
  EXPECT_GT(*o.blowup_time_estimate, 0.055);
  EXPECT_LT(*o.blowup_time_estimate, 0.075);
  const std::size_t n = o.reports.size();
  ASSERT_GT(n, 6u);
  for (std::size_t i = n - 5; i < n; ++i) EXPECT_GT(o.reports[i].F1, o.reports[i - 1].F1);
}

TEST(Residuals, ResidualFunctionsOnHandTrace) {
  EnergyTrace tr;
  tr.dt = 0.5;
  tr.J = {2.0, 1.5, 1.25};
  tr.dissipation = {0.5, 0.25};
  tr.source_work = {0.0, 0.0};
  EXPECT_EQ(conservation_residual(tr), 0.0);
  tr.F1 = {1.0, 0.5};
  tr.I = {1.0, 0.0};
  EXPECT_EQ(nehari_identity_residual(tr), 0.0);
}

TEST(Residuals, SmoothRunIsConsistent) {
  Problem pr = example2(60);
  pr.cfg.t_end = 5.0;
  pr.cfg.dt = 0.05;
  const SimulationOutcome o = run(pr.u0, pr.cfg);
  ASSERT_EQ(o.status, RunStatus::completed);
  EXPECT_TRUE(std::isfinite(o.conservation_residual_max));
  EXPECT_LT(o.conservation_residual_max, 1.0);
}
