#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "thinfilm/error.hpp"

namespace thinfilm {

/// Rectangle (0,Lx)x(0,Ly) with Nx x Ny interior nodes.
///
/// Node coordinates are x_i = i*dx for i = 0..Nx+1 (likewise y_j); the
/// nodes i = 0 and i = Nx+1 lie on the boundary where u vanishes.
class Grid2D {
 public:
  Grid2D(double lx, double ly, int nx, int ny) : lx_(lx), ly_(ly), nx_(nx), ny_(ny) {
    require(nx >= 2 && ny >= 2, "grid needs at least 2x2 interior nodes");
    require(lx > 0.0 && ly > 0.0 && std::isfinite(lx) && std::isfinite(ly),
            "domain lengths must be positive and finite");
    dx_ = lx_ / (nx_ + 1);
    dy_ = ly_ / (ny_ + 1);
  }

  double lx() const { return lx_; }
  double ly() const { return ly_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double x(int i) const { return i * dx_; }
  double y(int j) const { return j * dy_; }
  double cell_area() const { return dx_ * dy_; }
  double measure() const { return lx_ * ly_; }

  std::size_t interior_size() const { return std::size_t(nx_) * std::size_t(ny_); }
  std::size_t node_size() const { return std::size_t(nx_ + 2) * std::size_t(ny_ + 2); }

  // Row-major, j outer: interior node (i,j), 1 <= i <= Nx.
  std::size_t interior_index(int i, int j) const {
    return std::size_t(j - 1) * std::size_t(nx_) + std::size_t(i - 1);
  }
  // All nodes (i,j), 0 <= i <= Nx+1.
  std::size_t node_index(int i, int j) const {
    return std::size_t(j) * std::size_t(nx_ + 2) + std::size_t(i);
  }

  friend bool operator==(const Grid2D& a, const Grid2D& b) {
    return a.lx_ == b.lx_ && a.ly_ == b.ly_ && a.nx_ == b.nx_ && a.ny_ == b.ny_;
  }

 private:
  double lx_, ly_;
  int nx_, ny_;
  double dx_ = 0.0, dy_ = 0.0;
};

/// Interior grid function with implicit zero extension.
///
/// Reads at boundary and ghost indices (i <= 0, i >= Nx+1, same for j)
/// return exactly 0.
class Field {
 public:
  explicit Field(const Grid2D& grid) : grid_(grid), values_(grid.interior_size(), 0.0) {}

  Field(const Grid2D& grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    require(values_.size() == grid_.interior_size(), "field size does not match grid");
  }

  /// Samples f(x, y) at the interior nodes.
  static Field sample(const Grid2D& grid, const std::function<double(double, double)>& f) {
    Field out(grid);
    for (int j = 1; j <= grid.ny(); ++j)
      for (int i = 1; i <= grid.nx(); ++i) out.values_[grid.interior_index(i, j)] = f(grid.x(i), grid.y(j));
    return out;
  }

  const Grid2D& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double operator()(int i, int j) const {
    if (i <= 0 || j <= 0 || i > grid_.nx() || j > grid_.ny()) return 0.0;
    return values_[grid_.interior_index(i, j)];
  }
  double& interior(int i, int j) { return values_[grid_.interior_index(i, j)]; }

  bool diverged() const { return diverged_; }
  void flag_diverged() { diverged_ = true; }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) {
      if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
      m = std::max(m, std::abs(v));
    }
    return m;
  }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
  }

  Field& operator*=(double a) {
    for (double& v : values_) v *= a;
    return *this;
  }

 private:
  Grid2D grid_;
  std::vector<double> values_;
  bool diverged_ = false;
};

inline Field operator*(double a, Field f) { return f *= a; }

/// Values on all (Nx+2)x(Ny+2) nodes, boundary included.
class NodeArray {
 public:
  explicit NodeArray(const Grid2D& grid, double fill = 0.0)
      : grid_(grid), values_(grid.node_size(), fill) {}

  static NodeArray sample(const Grid2D& grid, const std::function<double(double, double)>& f) {
    NodeArray out(grid);
    for (int j = 0; j <= grid.ny() + 1; ++j)
      for (int i = 0; i <= grid.nx() + 1; ++i) out(i, j) = f(grid.x(i), grid.y(j));
    return out;
  }

  const Grid2D& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator()(int i, int j) const { return values_[grid_.node_index(i, j)]; }
  double& operator()(int i, int j) { return values_[grid_.node_index(i, j)]; }

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

/// Variable exponent p on all nodes; 2 < p- <= p+ < inf.
class ExponentField {
 public:
  explicit ExponentField(NodeArray values) : values_(std::move(values)) {
    cache_bounds();
    require(p_minus_ > 2.0 && std::isfinite(p_plus_),
            "exponent field must satisfy 2 < p- <= p+ < inf");
  }

  static ExponentField sample(const Grid2D& grid, const std::function<double(double, double)>& f) {
    return ExponentField(NodeArray::sample(grid, f));
  }

  static ExponentField constant(const Grid2D& grid, double q) { return ExponentField(NodeArray(grid, q)); }

  /// Skips the p > 2 check. Only for degenerate-limit experiments.
  static ExponentField unchecked(NodeArray values) {
    ExponentField p;
    p.values_ = std::move(values);
    p.cache_bounds();
    return p;
  }

  const Grid2D& grid() const { return values_.grid(); }
  const NodeArray& nodes() const { return values_; }
  double operator()(int i, int j) const { return values_(i, j); }
  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }

 private:
  ExponentField() : values_(Grid2D(1.0, 1.0, 2, 2)) {}

  void cache_bounds() {
    auto v = values_.values();
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    p_minus_ = *lo;
    p_plus_ = *hi;
  }

  NodeArray values_;
  double p_minus_ = 0.0, p_plus_ = 0.0;
};

/// |grad u|^2 by central differences on every node, ghosts read as zero.
inline NodeArray gradient_magnitude_sq(const Field& u) {
  const Grid2D& g = u.grid();
  NodeArray out(g);
  const double sx = 1.0 / (2.0 * g.dx());
  const double sy = 1.0 / (2.0 * g.dy());
  for (int j = 0; j <= g.ny() + 1; ++j) {
    for (int i = 0; i <= g.nx() + 1; ++i) {
      const double gx = (u(i + 1, j) - u(i - 1, j)) * sx;
      const double gy = (u(i, j + 1) - u(i, j - 1)) * sy;
      out(i, j) = gx * gx + gy * gy;
    }
  }
  return out;
}

namespace detail {
inline double checked_sum(double s) {
  if (!std::isfinite(s)) throw Error(ErrorKind::non_finite_integrand, "non-finite integrand");
  return s;
}
}  // namespace detail

/// Interior rectangle rule: dx*dy * sum over interior nodes.
inline double quadrature(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return detail::checked_sum(s) * f.grid().cell_area();
}

/// Same rule for an all-node array; boundary nodes do not contribute.
inline double quadrature(const NodeArray& f) {
  const Grid2D& g = f.grid();
  double s = 0.0;
  for (int j = 1; j <= g.ny(); ++j)
    for (int i = 1; i <= g.nx(); ++i) s += f(i, j);
  return detail::checked_sum(s) * g.cell_area();
}

inline double l2_norm_sq(const Field& u) {
  double s = 0.0;
  for (double v : u.values()) s += v * v;
  return detail::checked_sum(s) * u.grid().cell_area();
}

}  // namespace thinfilm
