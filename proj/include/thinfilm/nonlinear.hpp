#pragma once

#include <cmath>

#include "thinfilm/grid.hpp"

namespace thinfilm {

/// c = (|grad u|^2)^{p/2 - 1} on every node. 0^q = 0 for q > 0, no floor.
inline NodeArray coefficient_c(const Field& u, const ExponentField& p) {
  require(u.grid() == p.grid(), "field and exponent live on different grids");
  NodeArray c = gradient_magnitude_sq(u);
  auto cv = c.values();
  auto pv = p.nodes().values();
  for (std::size_t k = 0; k < cv.size(); ++k) cv[k] = std::pow(cv[k], 0.5 * pv[k] - 1.0);
  return c;
}

/// div(c grad u) with half-point averages c_{i+1/2,j} = (c_{i+1,j} + c_{i,j})/2,
/// evaluated on interior nodes.
inline Field divergence_with_coefficient(const Field& u, const NodeArray& c) {
  const Grid2D& g = u.grid();
  Field out(g);
  const double ax = 1.0 / (2.0 * g.dx() * g.dx());
  const double ay = 1.0 / (2.0 * g.dy() * g.dy());
  for (int j = 1; j <= g.ny(); ++j) {
    for (int i = 1; i <= g.nx(); ++i) {
      const double cc = c(i, j);
      const double ce = c(i + 1, j), cw = c(i - 1, j), cn = c(i, j + 1), cs = c(i, j - 1);
      const double uc = u(i, j);
      const double bx = (ce + cc) * u(i + 1, j) - (ce + 2.0 * cc + cw) * uc + (cc + cw) * u(i - 1, j);
      const double by = (cn + cc) * u(i, j + 1) - (cn + 2.0 * cc + cs) * uc + (cc + cs) * u(i, j - 1);
      out.interior(i, j) = ax * bx + ay * by;
    }
  }
  return out;
}

/// Discrete div(|grad u|^{p-2} grad u).
inline Field nonlinear_divergence(const Field& u, const ExponentField& p) {
  NodeArray c = coefficient_c(u, p);
  for (double v : c.values()) {
    if (!std::isfinite(v)) throw Error(ErrorKind::diverged_coefficient, "diverged coefficient");
  }
  return divergence_with_coefficient(u, c);
}

/// Threshold T = k^{1/(2-p)} separating forward (|grad u| < T) from backward
/// (|grad u| > T) diffusion in div((1 - k|grad u|^{p-2}) grad u).
inline NodeArray threshold_map(double k_t, const ExponentField& p) {
  require(k_t > 0.0, "threshold needs k(t) > 0");
  NodeArray out(p.grid());
  auto ov = out.values();
  auto pv = p.nodes().values();
  for (std::size_t k = 0; k < ov.size(); ++k) {
    if (pv[k] == 2.0) throw Error(ErrorKind::degenerate_exponent, "degenerate exponent");
    ov[k] = std::pow(k_t, 1.0 / (2.0 - pv[k]));
  }
  return out;
}

}  // namespace thinfilm
