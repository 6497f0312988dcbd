#pragma once

// Closed-form time bounds for blow-up and decay, with every intermediate
// constant exposed.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "thinfilm/grid.hpp"
#include "thinfilm/schedule.hpp"
#include "thinfilm/spectral.hpp"

namespace thinfilm {

struct TheoremConstants {
  double p_minus = 0.0;
  double p_plus = 0.0;
  double omega_measure = 0.0;
  double lambda1 = 0.0;
  double B2_sq = 0.0;
  double k0 = 0.0;
  std::optional<double> S_p;
  std::optional<double> C3_tilde;
  std::optional<double> C4_tilde;
  std::optional<double> kappa_star;
};

/// min over discrete modes of lambda + lambda^2 + alpha lambda^{2s}.
inline double discrete_B2_sq(const Grid2D& g, double alpha, double s) {
  const SymbolTable sym(g, alpha, s);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < g.interior_size(); ++k) best = std::min(best, sym.operator_symbol(k));
  return best;
}

inline TheoremConstants theorem_constants(const Grid2D& g, const ExponentField& p, const CoefficientSchedule& k,
                                          double alpha, double s) {
  TheoremConstants c;
  c.p_minus = p.p_minus();
  c.p_plus = p.p_plus();
  c.omega_measure = g.measure();
  c.lambda1 = mode_eigenvalue(g, 1, 1);
  c.B2_sq = discrete_B2_sq(g, alpha, s);
  c.k0 = k(0.0);
  return c;
}

namespace detail {
inline void hypothesis(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::hypothesis_violated, what);
}
inline void check_exponents(const TheoremConstants& c) {
  hypothesis(c.p_minus > 2.0 && c.p_plus >= c.p_minus && std::isfinite(c.p_plus),
             "exponents must satisfy 2 < p- <= p+ < inf");
}
}  // namespace detail

struct BlowupBound {
  double C0 = 0.0, C1 = 0.0, C2 = 0.0, C3 = 0.0;
  double T = 0.0;
  bool used_depth = false;
};

/// Upper bound on the blow-up time for J0 below the well depth.
///
/// With d_lower > 0: C0 = k(0)(p- - 2)/p- (1 - J0/d_lower), else the J0 < 0
/// branch C0 = k(0)(p- - 2)/p-. Then
///   C1 = lambda1 min{C0^{2/p+} |Omega|^{(2-p+)/p+}, C0^{2/p-} |Omega|^{(2-p-)/p-}}
///   C2 = min{(C1 F10)^{p+/2}, (C1 F10)^{p-/2}}
///   C3 = (C1 / (1 + C2^{2/p+ - 2/p-}))^{2/p-}
///   T  = 2 / (C3 (p- - 2)) F10^{1 - p-/2}
inline BlowupBound blowup_upper_bound_T(const TheoremConstants& c, double J0, double F10,
                                        std::optional<double> d_lower = std::nullopt) {
  detail::check_exponents(c);
  detail::hypothesis(F10 > 0.0, "blow-up hypothesis not satisfied: F1(0) must be positive");
  detail::hypothesis(c.k0 > 0.0 && c.lambda1 > 0.0 && c.omega_measure > 0.0,
                     "blow-up hypothesis not satisfied: constants must be positive");
  const double pm = c.p_minus, pp = c.p_plus;
  BlowupBound b;
  if (d_lower && *d_lower > 0.0) {
    detail::hypothesis(J0 < *d_lower, "blow-up hypothesis not satisfied: J(u0;0) >= d");
    b.C0 = c.k0 * (pm - 2.0) / pm * (1.0 - J0 / *d_lower);
    b.used_depth = true;
  } else {
    detail::hypothesis(J0 < 0.0, "blow-up hypothesis not satisfied: J(u0;0) >= 0 without a well depth");
    b.C0 = c.k0 * (pm - 2.0) / pm;
  }
  const double om = c.omega_measure;
  b.C1 = c.lambda1 * std::min(std::pow(b.C0, 2.0 / pp) * std::pow(om, (2.0 - pp) / pp),
                              std::pow(b.C0, 2.0 / pm) * std::pow(om, (2.0 - pm) / pm));
  const double cf = b.C1 * F10;
  b.C2 = std::min(std::pow(cf, pp / 2.0), std::pow(cf, pm / 2.0));
  b.C3 = std::pow(b.C1 / (1.0 + std::pow(b.C2, 2.0 / pp - 2.0 / pm)), 2.0 / pm);
  b.T = 2.0 / (b.C3 * (pm - 2.0)) * std::pow(F10, 1.0 - pm / 2.0);
  return b;
}

struct HighEnergyBound {
  double threshold = 0.0;  // ((p- - 2)/(2p-)) B2^2 ||u0||^2
  double denominator = 0.0;
  double T = 0.0;
};

/// T <= 8(p- - 1)||u0||^2 / ((p- - 2)^2 ((p- - 2) B2^2 ||u0||^2 - 2p- J0))
/// for 0 < J0 < ((p- - 2)/(2p-)) B2^2 ||u0||^2.
inline HighEnergyBound blowup_upper_bound_high_energy(const TheoremConstants& c, double J0, double u0_norm2_sq) {
  detail::check_exponents(c);
  const double pm = c.p_minus;
  HighEnergyBound b;
  b.threshold = (pm - 2.0) / (2.0 * pm) * c.B2_sq * u0_norm2_sq;
  detail::hypothesis(u0_norm2_sq > 0.0 && J0 > 0.0 && J0 < b.threshold,
                     "high-energy blow-up hypothesis not satisfied");
  b.denominator = (pm - 2.0) * (pm - 2.0) * ((pm - 2.0) * c.B2_sq * u0_norm2_sq - 2.0 * pm * J0);
  b.T = 8.0 * (pm - 1.0) * u0_norm2_sq / b.denominator;
  return b;
}

struct LifespanBound {
  double r_plus = 0.0, r_minus = 0.0;
  double C4 = 0.0, C5 = 0.0;
  double T = 0.0;
  double error_estimate = 0.0;
};

/// r(p) = (2N - (N-2)p) / (2N + 8 - (N+2)p)
inline double lifespan_exponent(int n_dim, double p) {
  return (2.0 * n_dim - (n_dim - 2.0) * p) / (2.0 * n_dim + 8.0 - (n_dim + 2.0) * p);
}

/// Lower bound T* >= int_{F10}^inf dy / (C4 y^{r+} + C5 y^{r-}), with
///   C4 = (2^{p+/2} kappa C3~)^{4/(2N+8-(N+2)p+)},
///   C5 = (2^{p-/2} kappa C4~)^{4/(2N+8-(N+2)p-)}.
///
/// The substitution y = F10 x^{-1/(r- - 1)} maps the half line onto (0,1]
/// and the integrand becomes bounded:
///   F10^{1-r-}/(r- - 1) / (C4 F10^{r+ - r-} x^{-(r+ - r-)/(r- - 1)} + C5).
inline LifespanBound lifespan_lower_bound(const TheoremConstants& c, int n_dim, double F10) {
  detail::check_exponents(c);
  detail::hypothesis(n_dim >= 1, "space dimension must be positive");
  detail::hypothesis(c.p_plus < 2.0 * (n_dim + 4.0) / (n_dim + 2.0),
                     "lifespan hypothesis not satisfied: p+ >= 2(N+4)/(N+2)");
  detail::hypothesis(c.C3_tilde && c.C4_tilde && c.kappa_star,
                     "lifespan bound needs C3~, C4~ and kappa*");
  detail::hypothesis(F10 > 0.0, "lifespan bound needs F1(0) > 0");
  LifespanBound b;
  const double n = n_dim;
  b.r_plus = lifespan_exponent(n_dim, c.p_plus);
  b.r_minus = lifespan_exponent(n_dim, c.p_minus);
  if (!(b.r_minus > 1.0)) throw Error(ErrorKind::invalid_argument, "internal error: r <= 1");
  b.C4 = std::pow(std::pow(2.0, c.p_plus / 2.0) * *c.kappa_star * *c.C3_tilde,
                  4.0 / (2.0 * n + 8.0 - (n + 2.0) * c.p_plus));
  b.C5 = std::pow(std::pow(2.0, c.p_minus / 2.0) * *c.kappa_star * *c.C4_tilde,
                  4.0 / (2.0 * n + 8.0 - (n + 2.0) * c.p_minus));
  detail::hypothesis(b.C4 > 0.0 && b.C5 > 0.0, "lifespan bound needs positive constants");

  const double rm1 = b.r_minus - 1.0;
  const double gap = b.r_plus - b.r_minus;
  const double scale = std::pow(F10, 1.0 - b.r_minus) / rm1;
  const double c4a = b.C4 * std::pow(F10, gap);
  const double q = gap / rm1;
  auto f = [&](double x) {
    if (q == 0.0) return scale / (c4a + b.C5);
    if (x <= 0.0) return 0.0;
    return scale / (c4a * std::pow(x, -q) + b.C5);
  };
  using boost::math::quadrature::gauss_kronrod;
  b.T = gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 20, 1e-13, &b.error_estimate);
  return b;
}

struct DecayRate {
  double delta0 = 0.0;
  double delta1 = 0.0;
  double envelope = 0.0;  // ||u(t)||_(alpha) <= envelope * exp(-delta1 t)
};

/// delta0 = (J0/d)^{(p- - 2)/2},
/// delta1 = B2^2 p+ (p- - 2)(1 - delta0) / (2p- (p+ - 2 delta0)).
inline DecayRate decay_rate_delta1(const TheoremConstants& c, double J0, double d_lower) {
  detail::check_exponents(c);
  detail::hypothesis(J0 > 0.0 && J0 < d_lower, "decay hypothesis not satisfied: need 0 < J(u0;0) < d");
  const double pm = c.p_minus, pp = c.p_plus;
  DecayRate r;
  r.delta0 = std::pow(J0 / d_lower, (pm - 2.0) / 2.0);
  r.delta1 = c.B2_sq * pp * (pm - 2.0) * (1.0 - r.delta0) / (2.0 * pm * (pp - 2.0 * r.delta0));
  r.envelope = std::sqrt(2.0 * std::numbers::e * pm * d_lower / (pm - 2.0));
  return r;
}

}  // namespace thinfilm
