#pragma once

// Two-dimensional discrete sine transform (DST-I) pair and the spectral
// symbols of the linear operator (-Delta)^2 + alpha (-Delta)^{2s} - Delta.
//
//   forward:  v(m,l) = sum_{i,j} u_{i,j} sin(w1 x_i) sin(w2 y_j)
//   inverse:  u_{i,j} = 4/((Nx+1)(Ny+1)) sum_{m,l} v(m,l) sin(w1 x_i) sin(w2 y_j)
//
// with w1 = pi m / Lx, w2 = pi l / Ly. Mode indices are 1-based; storage
// uses the Field layout, so mode (m,l) sits where interior node (i=m, j=l)
// would.

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "thinfilm/grid.hpp"

namespace thinfilm {

class SpectralField {
 public:
  explicit SpectralField(const Grid2D& grid) : grid_(grid), coeffs_(grid.interior_size(), 0.0) {}
  SpectralField(const Grid2D& grid, std::vector<double> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
    require(coeffs_.size() == grid_.interior_size(), "spectral field size does not match grid");
  }

  const Grid2D& grid() const { return grid_; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }
  double operator()(int m, int l) const { return coeffs_[grid_.interior_index(m, l)]; }
  double& operator()(int m, int l) { return coeffs_[grid_.interior_index(m, l)]; }

 private:
  Grid2D grid_;
  std::vector<double> coeffs_;
};

namespace detail {

// FFTW's planner is not thread-safe, execution on new arrays is. Plans are
// created once per shape under a lock and reused for the process lifetime.
// FFTW_ESTIMATE keeps planning deterministic, so repeated runs are
// bit-identical.
inline fftw_plan dst_plan(int nx, int ny) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto it = plans.find({nx, ny});
  if (it != plans.end()) return it->second;
  double* buffer = fftw_alloc_real(std::size_t(nx) * std::size_t(ny));
  fftw_plan plan = fftw_plan_r2r_2d(ny, nx, buffer, buffer, FFTW_RODFT00, FFTW_RODFT00,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buffer);
  require(plan != nullptr, "FFTW could not plan a DST-I transform");
  plans.emplace(std::pair{nx, ny}, plan);
  return plan;
}

// In-place unnormalized DST-I in both directions: 4 * sum x sin sin.
inline void dst_in_place(int nx, int ny, std::span<double> data) {
  fftw_execute_r2r(dst_plan(nx, ny), data.data(), data.data());
}

}  // namespace detail

inline SpectralField dst_forward(const Field& u) {
  const Grid2D& g = u.grid();
  std::vector<double> c(u.values().begin(), u.values().end());
  detail::dst_in_place(g.nx(), g.ny(), c);
  for (double& v : c) v *= 0.25;
  return SpectralField(g, std::move(c));
}

inline Field dst_inverse(const SpectralField& v) {
  const Grid2D& g = v.grid();
  std::vector<double> u(v.coeffs().begin(), v.coeffs().end());
  detail::dst_in_place(g.nx(), g.ny(), u);
  const double scale = 1.0 / (double(g.nx() + 1) * double(g.ny() + 1));
  for (double& x : u) x *= scale;
  return Field(g, std::move(u));
}

/// quadrature(u^2) == parseval_weight(grid) * sum of squared coefficients.
inline double parseval_weight(const Grid2D& g) {
  return g.cell_area() * 4.0 / (double(g.nx() + 1) * double(g.ny() + 1));
}

/// lambda(m,l) = (pi m / Lx)^2 + (pi l / Ly)^2
inline double mode_eigenvalue(const Grid2D& g, int m, int l) {
  const double w1 = std::numbers::pi * m / g.lx();
  const double w2 = std::numbers::pi * l / g.ly();
  return w1 * w1 + w2 * w2;
}

struct SolverOptions {
  // Drop alpha from the lambda^{2s} term of the denominator, reproducing the
  // displayed update formula literally.
  bool verbatim_denominator = false;
  // Source coefficient moved into the implicit denominator (0 = explicit).
  double implicit_source = 0.0;
};

/// Per-mode symbols lambda, lambda^2, lambda^{2s}, lambda^s and, when a time
/// step is given, the semi-implicit denominators
///   D = 1 + dt (lambda^2 + alpha lambda^{2s} + lambda).
class SymbolTable {
 public:
  SymbolTable(const Grid2D& grid, double alpha, double s) : grid_(grid), alpha_(alpha), s_(s) {
    require(std::isfinite(alpha) && s > 0.0 && s < 1.0, "need finite alpha and s in (0,1)");
    const std::size_t n = grid.interior_size();
    lambda_.resize(n);
    lambda_sq_.resize(n);
    lambda_2s_.resize(n);
    lambda_s_.resize(n);
    for (int l = 1; l <= grid.ny(); ++l) {
      for (int m = 1; m <= grid.nx(); ++m) {
        const std::size_t k = grid.interior_index(m, l);
        const double lam = mode_eigenvalue(grid, m, l);
        lambda_[k] = lam;
        lambda_sq_[k] = lam * lam;
        lambda_2s_[k] = std::pow(lam, 2.0 * s);
        lambda_s_[k] = std::pow(lam, s);
      }
    }
  }

  /// Throws ErrorKind::indefinite_denominator when some D <= 0.
  SymbolTable(const Grid2D& grid, double alpha, double s, double dt, SolverOptions opts = {})
      : SymbolTable(grid, alpha, s) {
    require(dt > 0.0 && std::isfinite(dt), "time step must be positive");
    dt_ = dt;
    const double a = opts.verbatim_denominator ? 1.0 : alpha;
    denominators_.resize(lambda_.size());
    for (std::size_t k = 0; k < lambda_.size(); ++k) {
      const double d = 1.0 + dt * (lambda_sq_[k] + a * lambda_2s_[k] + lambda_[k]) - dt * opts.implicit_source;
      if (!(d > 0.0)) {
        throw Error(ErrorKind::indefinite_denominator,
                    "indefinite denominator: reduce the time step");
      }
      denominators_[k] = d;
    }
  }

  const Grid2D& grid() const { return grid_; }
  double alpha() const { return alpha_; }
  double s() const { return s_; }
  double dt() const { return dt_; }

  std::span<const double> lambda() const { return lambda_; }
  std::span<const double> lambda_sq() const { return lambda_sq_; }
  std::span<const double> lambda_2s() const { return lambda_2s_; }
  std::span<const double> lambda_s() const { return lambda_s_; }
  std::span<const double> denominators() const { return denominators_; }
  bool has_denominators() const { return !denominators_.empty(); }

  /// lambda + lambda^2 + alpha lambda^{2s}: the quadratic form of ||.||_(alpha).
  double operator_symbol(std::size_t k) const { return lambda_[k] + lambda_sq_[k] + alpha_ * lambda_2s_[k]; }

 private:
  Grid2D grid_;
  double alpha_, s_;
  double dt_ = 0.0;
  std::vector<double> lambda_, lambda_sq_, lambda_2s_, lambda_s_, denominators_;
};

/// (-Delta)^r u via the sine basis: multiply mode (m,l) by lambda^r.
inline Field apply_fractional_laplacian(const Field& u, double r) {
  require(r >= 0.0, "fractional power must be nonnegative");
  SpectralField v = dst_forward(u);
  const Grid2D& g = u.grid();
  for (int l = 1; l <= g.ny(); ++l)
    for (int m = 1; m <= g.nx(); ++m) v(m, l) *= std::pow(mode_eigenvalue(g, m, l), r);
  return dst_inverse(v);
}

/// Spectral division by the denominators; returns coefficients so callers can
/// reuse them (e.g. for ||u||_(alpha)).
inline SpectralField solve_semi_implicit_spectral(const Field& rhs, const SymbolTable& symbols) {
  require(symbols.has_denominators(), "symbol table was built without a time step");
  require(rhs.grid() == symbols.grid(), "right-hand side and symbols live on different grids");
  SpectralField v = dst_forward(rhs);
  auto c = v.coeffs();
  auto d = symbols.denominators();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] /= d[k];
  return v;
}

inline Field solve_semi_implicit(const Field& rhs, const SymbolTable& symbols) {
  return dst_inverse(solve_semi_implicit_spectral(rhs, symbols));
}

}  // namespace thinfilm
