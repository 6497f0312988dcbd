#pragma once

// Built-in initial data and parameter sets for the two reference problems.

#include <cmath>
#include <numbers>
#include <string>

#include "thinfilm/evolve.hpp"

namespace thinfilm {

struct Problem {
  Field u0;
  SimulationConfig cfg;
};

inline ExponentField example1_exponent(const Grid2D& g) {
  return ExponentField::sample(
      g, [](double x, double y) { return 2.0 + 5.0 / ((x - 5.0) * (x - 5.0) + (y - 5.0) * (y - 5.0) + 1.5); });
}

inline ExponentField example2_exponent(const Grid2D& g) {
  return ExponentField::sample(g, [](double x, double y) {
    return 2.0 + (x / 25.0 - 1.0) * (x / 25.0 - 1.0) + (y / 25.0 - 1.0) * (y / 25.0 - 1.0);
  });
}

/// u0 = xy(10-x)(10-y) sin^2(pi x/10) sin^2(pi y/10) / 400 on (0,10)^2,
/// p = 2 + 5/((x-5)^2 + (y-5)^2 + 1.5), k = 10 e^t.
inline Problem example1(int n = 150) {
  const Grid2D g(10.0, 10.0, n, n);
  const double pi = std::numbers::pi;
  Field u0 = Field::sample(g, [&](double x, double y) {
    const double sx = std::sin(pi * x / 10.0), sy = std::sin(pi * y / 10.0);
    return x * y * (10.0 - x) * (10.0 - y) * sx * sx * sy * sy / 400.0;
  });
  SimulationConfig cfg(example1_exponent(g), CoefficientSchedule::exponential(10.0, 1.0));
  cfg.alpha = -0.95;
  cfg.s = 0.9;
  cfg.dt = 1e-4;
  cfg.t_end = 0.1;
  return {std::move(u0), std::move(cfg)};
}

/// Four compact bumps exp(-64/(16 - r^2)) scaled by 5 at (15,15), (35,15),
/// (15,35), (35,35) on (0,50)^2; p = 2 + (x/25-1)^2 + (y/25-1)^2;
/// k = (1 + (2/pi) arctan t)/400.
inline Problem example2(int n = 500) {
  const Grid2D g(50.0, 50.0, n, n);
  auto bump = [](double x, double y, double cx, double cy) {
    const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    return r2 < 16.0 ? std::exp(-64.0 / (16.0 - r2)) : 0.0;
  };
  Field u0 = Field::sample(g, [&](double x, double y) {
    return 5.0 * (bump(x, y, 15, 15) + bump(x, y, 35, 15) + bump(x, y, 15, 35) + bump(x, y, 35, 35));
  });
  SimulationConfig cfg(example2_exponent(g), CoefficientSchedule::arctan_ramp(1.0 / 400.0));
  cfg.alpha = -0.05;
  cfg.s = 0.9;
  cfg.dt = 0.5;
  cfg.t_end = 500.0;
  return {std::move(u0), std::move(cfg)};
}

inline Problem preset(const std::string& name, int n = 0) {
  if (name == "example1") return n > 0 ? example1(n) : example1();
  if (name == "example2") return n > 0 ? example2(n) : example2();
  throw Error(ErrorKind::config, "unknown preset '" + name + "'");
}

}  // namespace thinfilm
