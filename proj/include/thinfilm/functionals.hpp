#pragma once

// Discrete potential-well quantities: ||.||_(alpha), the modular, the
// Luxemburg norm, the energy J, the Nehari functional I and the projection
// onto the Nehari manifold.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "thinfilm/grid.hpp"
#include "thinfilm/schedule.hpp"
#include "thinfilm/spectral.hpp"

namespace thinfilm {

struct ModelParams {
  double alpha = 0.0;
  double s = 0.5;
  double source_lambda = 0.0;
};

struct FunctionalReport {
  double t = 0.0;
  double J = 0.0;
  double I = 0.0;
  double norm_alpha_sq = 0.0;
  double F1 = 0.0;
  double modular = 0.0;
  double weighted_modular = 0.0;
  double umax = 0.0;
};

/// ||u||^2_(alpha) = ||grad u||^2 + ||Delta u||^2 + alpha ||(-Delta)^s u||^2,
/// from sine coefficients.
inline double norm_alpha_sq(const SpectralField& v, double alpha, double s) {
  const Grid2D& g = v.grid();
  double sum = 0.0;
  for (int l = 1; l <= g.ny(); ++l) {
    for (int m = 1; m <= g.nx(); ++m) {
      const double lam = mode_eigenvalue(g, m, l);
      const double c = v(m, l);
      sum += (lam + lam * lam + alpha * std::pow(lam, 2.0 * s)) * c * c;
    }
  }
  return parseval_weight(g) * sum;
}

inline double norm_alpha_sq(const SpectralField& v, const SymbolTable& symbols) {
  auto c = v.coeffs();
  double sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) sum += symbols.operator_symbol(k) * c[k] * c[k];
  return parseval_weight(v.grid()) * sum;
}

inline double norm_alpha_sq(const Field& u, double alpha, double s) {
  return norm_alpha_sq(dst_forward(u), alpha, s);
}

struct ModularParts {
  double modular = 0.0;           // quadrature(|grad u|^p)
  double weighted_modular = 0.0;  // quadrature((1/p) |grad u|^p)
  double weighted_gap = 0.0;      // quadrature(((p-2)/p) |grad u|^p)
};

inline ModularParts modular_parts(const Field& u, const ExponentField& p) {
  require(u.grid() == p.grid(), "field and exponent live on different grids");
  const NodeArray g2 = gradient_magnitude_sq(u);
  const Grid2D& g = u.grid();
  ModularParts out;
  for (int j = 1; j <= g.ny(); ++j) {
    for (int i = 1; i <= g.nx(); ++i) {
      const double pij = p(i, j);
      const double r = std::pow(g2(i, j), 0.5 * pij);
      out.modular += r;
      out.weighted_modular += r / pij;
      out.weighted_gap += (pij - 2.0) / pij * r;
    }
  }
  const double a = g.cell_area();
  out.modular = detail::checked_sum(out.modular) * a;
  out.weighted_modular = detail::checked_sum(out.weighted_modular) * a;
  out.weighted_gap = detail::checked_sum(out.weighted_gap) * a;
  return out;
}

/// Assembles a report from precomputed pieces; J and I follow by construction.
inline FunctionalReport make_report(double t, double k_t, double norm_alpha, const ModularParts& mp,
                                    double l2_sq, double umax) {
  FunctionalReport r;
  r.t = t;
  r.norm_alpha_sq = norm_alpha;
  r.modular = mp.modular;
  r.weighted_modular = mp.weighted_modular;
  r.J = 0.5 * norm_alpha - k_t * mp.weighted_modular;
  r.I = norm_alpha - k_t * mp.modular;
  r.F1 = 0.5 * l2_sq;
  r.umax = umax;
  return r;
}

inline FunctionalReport functional_report(const Field& u, double t, const ExponentField& p,
                                          const CoefficientSchedule& k, const ModelParams& m) {
  return make_report(t, k(t), norm_alpha_sq(u, m.alpha, m.s), modular_parts(u, p), l2_norm_sq(u), u.max_abs());
}

inline double energy_J(const Field& u, double t, const ExponentField& p, const CoefficientSchedule& k,
                       const ModelParams& m) {
  return 0.5 * norm_alpha_sq(u, m.alpha, m.s) - k(t) * modular_parts(u, p).weighted_modular;
}

inline double nehari_I(const Field& u, double t, const ExponentField& p, const CoefficientSchedule& k,
                       const ModelParams& m) {
  return norm_alpha_sq(u, m.alpha, m.s) - k(t) * modular_parts(u, p).modular;
}

/// Modular rho(g/lambda) = quadrature((g/lambda)^p) over interior nodes.
inline double scaled_modular(const NodeArray& g, const ExponentField& p, double lambda) {
  const Grid2D& grid = g.grid();
  double s = 0.0;
  for (int j = 1; j <= grid.ny(); ++j)
    for (int i = 1; i <= grid.nx(); ++i) s += std::pow(g(i, j) / lambda, p(i, j));
  return s * grid.cell_area();
}

/// Luxemburg norm inf{lambda > 0 : rho(g/lambda) <= 1}, g >= 0.
///
/// rho(g/lambda) is strictly decreasing in lambda, so the root of
/// rho(g/lambda) = 1 is bracketed and bisected (geometrically) to 1e-10
/// relative width.
inline double luxemburg_norm(const NodeArray& g, const ExponentField& p) {
  require(g.grid() == p.grid(), "array and exponent live on different grids");
  const double rho1 = scaled_modular(g, p, 1.0);
  if (!std::isfinite(rho1)) throw Error(ErrorKind::non_finite_integrand, "non-finite integrand");
  if (rho1 == 0.0) return 0.0;
  // rho(g/lambda) lies between lambda^{-p+} rho(g) and lambda^{-p-} rho(g).
  const double e1 = std::pow(rho1, 1.0 / p.p_minus());
  const double e2 = std::pow(rho1, 1.0 / p.p_plus());
  double lo = std::min(e1, e2) * 0.5, hi = std::max(e1, e2) * 2.0;
  while (scaled_modular(g, p, lo) < 1.0) lo *= 0.5;
  while (scaled_modular(g, p, hi) > 1.0) hi *= 2.0;
  while (hi - lo > 1e-12 * hi) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    (scaled_modular(g, p, mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline NodeArray gradient_magnitude(const Field& u) {
  NodeArray g = gradient_magnitude_sq(u);
  for (double& v : g.values()) v = std::sqrt(v);
  return g;
}

struct NehariScaling {
  double mu_star = 0.0;
  double mu_hat1 = 0.0;
  double mu_hat2 = 0.0;
};

/// The scalar profile h(mu) = I(mu u; t) = mu^2 A - k sum mu^{p_ij} G_ij
/// for a fixed field, with G = cell_area * |grad u|^p per interior node.
class NehariProfile {
 public:
  NehariProfile(const Field& u, double k_t, const ExponentField& p, const ModelParams& m)
      : k_(k_t), norm_alpha_sq_(thinfilm::norm_alpha_sq(u, m.alpha, m.s)) {
    const NodeArray g2 = gradient_magnitude_sq(u);
    const Grid2D& g = u.grid();
    for (int j = 1; j <= g.ny(); ++j) {
      for (int i = 1; i <= g.nx(); ++i) {
        const double w = std::pow(g2(i, j), 0.5 * p(i, j)) * g.cell_area();
        if (w > 0.0) {
          weights_.push_back(w);
          exponents_.push_back(p(i, j));
        }
      }
    }
  }

  double norm_alpha_sq() const { return norm_alpha_sq_; }

  double modular(double mu) const {
    double s = 0.0;
    for (std::size_t n = 0; n < weights_.size(); ++n) s += std::pow(mu, exponents_[n]) * weights_[n];
    return s;
  }
  double weighted_modular(double mu) const {
    double s = 0.0;
    for (std::size_t n = 0; n < weights_.size(); ++n) s += std::pow(mu, exponents_[n]) * weights_[n] / exponents_[n];
    return s;
  }
  double nehari(double mu) const { return mu * mu * norm_alpha_sq_ - k_ * modular(mu); }
  double energy(double mu) const { return 0.5 * mu * mu * norm_alpha_sq_ - k_ * weighted_modular(mu); }

 private:
  double k_;
  double norm_alpha_sq_;
  std::vector<double> weights_, exponents_;
};

/// mu* > 0 with I(mu* u; t) = 0, plus the closed-form brackets
/// mu1 <= mu* <= mu2 built from the Luxemburg norm of |grad u|.
inline NehariScaling nehari_scale_mu_star(const Field& u, double t, const ExponentField& p,
                                          const CoefficientSchedule& k, const ModelParams& m) {
  const double k_t = k(t);
  const NehariProfile h(u, k_t, p, m);
  const double a = h.norm_alpha_sq();
  if (a == 0.0) throw Error(ErrorKind::zero_field, "zero field");
  require(a > 0.0, "||u||_(alpha)^2 must be positive for a Nehari projection");
  const double lux = luxemburg_norm(gradient_magnitude(u), p);
  const double pm = p.p_minus(), pp = p.p_plus();
  const double b1 = std::pow(a / (k_t * std::pow(lux, pm)), 1.0 / (pm - 2.0));
  const double b2 = std::pow(a / (k_t * std::pow(lux, pp)), 1.0 / (pp - 2.0));
  NehariScaling out;
  out.mu_hat1 = std::min(b1, b2);
  out.mu_hat2 = std::max(b1, b2);

  if (h.nehari(1.0) == 0.0) {
    out.mu_star = 1.0;
    return out;
  }
  constexpr double eps = 1e-6;
  double lo = out.mu_hat1 * (1.0 - eps), hi = out.mu_hat2 * (1.0 + eps);
  if (!(h.nehari(lo) > 0.0 && h.nehari(hi) < 0.0)) throw Error(ErrorKind::no_sign_change, "no sign change");
  const double tol = 1e-8 * a;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (h.nehari(mid) > 0.0 ? lo : hi) = mid;
  }
  const double hl = h.nehari(lo), hh = h.nehari(hi);
  out.mu_star = std::abs(hl) <= std::abs(hh) ? lo : hi;
  if (std::abs(h.nehari(out.mu_star)) > tol) throw Error(ErrorKind::no_sign_change, "no sign change");
  return out;
}

struct WellDepthEstimate {
  double upper = 0.0;  // min over trials of J(mu* v; t)
  std::optional<double> closed_form_upper;
  std::optional<double> closed_form_lower;
};

/// Closed-form bracket of d(t) in terms of an embedding constant S_p:
///   (p- - 2)/(2p-) min{...} <= d(t) <= (p+ - 2)/(2p+) max{...},
/// with {...} = {(k S^{p-})^{2/(2-p-)}, (k S^{p+})^{2/(2-p+)}}.
inline std::pair<double, double> depth_bounds_from_embedding(double k_t, double s_p, double p_minus,
                                                             double p_plus) {
  const double a = std::pow(k_t * std::pow(s_p, p_minus), 2.0 / (2.0 - p_minus));
  const double b = std::pow(k_t * std::pow(s_p, p_plus), 2.0 / (2.0 - p_plus));
  return {(p_minus - 2.0) / (2.0 * p_minus) * std::min(a, b), (p_plus - 2.0) / (2.0 * p_plus) * std::max(a, b)};
}

/// Certified upper bound for the discrete well depth d(t) from a trial set.
inline WellDepthEstimate well_depth_upper(double t, std::span<const Field> trials, const ExponentField& p,
                                          const CoefficientSchedule& k, const ModelParams& m,
                                          std::optional<double> embedding_constant = std::nullopt) {
  require(!trials.empty(), "empty trial set");
  WellDepthEstimate out;
  out.upper = std::numeric_limits<double>::infinity();
  for (const Field& v : trials) {
    const NehariScaling sc = nehari_scale_mu_star(v, t, p, k, m);
    const NehariProfile h(v, k(t), p, m);
    out.upper = std::min(out.upper, h.energy(sc.mu_star));
  }
  if (embedding_constant) {
    auto [lo, hi] = depth_bounds_from_embedding(k(t), *embedding_constant, p.p_minus(), p.p_plus());
    out.closed_form_lower = lo;
    out.closed_form_upper = hi;
  }
  return out;
}

/// Random smooth trial field: a few low sine modes with Gaussian weights.
inline Field random_trial_field(const Grid2D& g, std::mt19937_64& rng, int max_mode = 6) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField v(g);
  const int mx = std::min(max_mode, g.nx()), my = std::min(max_mode, g.ny());
  for (int l = 1; l <= my; ++l)
    for (int m = 1; m <= mx; ++m) v(m, l) = normal(rng) / double(m * l);
  return dst_inverse(v);
}

/// Largest sampled ratio ||grad v||_{p(.)} / ||v||_(alpha) over random
/// trials. This is a heuristic LOWER bound on the embedding constant S_p,
/// not a certified value usable for lower estimates of d(t).
inline double heuristic_embedding_lower_bound(const ExponentField& p, const ModelParams& m, int samples,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double best = 0.0;
  for (int n = 0; n < samples; ++n) {
    const Field v = random_trial_field(p.grid(), rng);
    const double na = norm_alpha_sq(v, m.alpha, m.s);
    if (!(na > 0.0)) continue;
    best = std::max(best, luxemburg_norm(gradient_magnitude(v), p) / std::sqrt(na));
  }
  return best;
}

}  // namespace thinfilm
