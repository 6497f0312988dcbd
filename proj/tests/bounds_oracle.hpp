#pragma once

// Scalar transcriptions of the bound formulas, written independently of
// the library for cross-checking.

#include <algorithm>
#include <cmath>

namespace oracle {

struct LowEnergy {
  double C0, C1, C2, C3, T;
};

inline LowEnergy low_energy(double pm, double pp, double om, double lam1, double k0, double J0, double F10,
                            double d /* <= 0 means absent */) {
  LowEnergy r{};
  r.C0 = d > 0 ? k0 * (pm - 2) / pm * (1 - J0 / d) : k0 * (pm - 2) / pm;
  const double a = std::exp(2 / pp * std::log(r.C0) + (2 - pp) / pp * std::log(om));
  const double b = std::exp(2 / pm * std::log(r.C0) + (2 - pm) / pm * std::log(om));
  r.C1 = lam1 * (a < b ? a : b);
  const double x = r.C1 * F10;
  const double c = std::exp(pp / 2 * std::log(x)), e = std::exp(pm / 2 * std::log(x));
  r.C2 = c < e ? c : e;
  r.C3 = std::exp(2 / pm * std::log(r.C1 / (1 + std::exp((2 / pp - 2 / pm) * std::log(r.C2)))));
  r.T = 2 / (r.C3 * (pm - 2)) * std::exp((1 - pm / 2) * std::log(F10));
  return r;
}

inline double high_energy(double pm, double B2, double u0sq, double J0) {
  const double q = pm - 2;
  return 8 * (pm - 1) * u0sq / (q * q * (q * B2 * u0sq - 2 * pm * J0));
}

struct Lifespan {
  double rp, rm, C4, C5;
};

inline Lifespan lifespan_constants(double pm, double pp, int N, double C3t, double C4t, double kappa) {
  Lifespan r{};
  r.rp = (2.0 * N - (N - 2.0) * pp) / (2.0 * N + 8 - (N + 2.0) * pp);
  r.rm = (2.0 * N - (N - 2.0) * pm) / (2.0 * N + 8 - (N + 2.0) * pm);
  r.C4 = std::exp(4 / (2.0 * N + 8 - (N + 2.0) * pp) * std::log(std::exp(pp / 2 * std::log(2.0)) * kappa * C3t));
  r.C5 = std::exp(4 / (2.0 * N + 8 - (N + 2.0) * pm) * std::log(std::exp(pm / 2 * std::log(2.0)) * kappa * C4t));
  return r;
}

/// int_a^inf dy/(C4 y^rp + C5 y^rm) by composite Simpson in s = log(y/a),
/// truncated where the integrand is negligible; the tail beyond uses the
/// dominant C4 or C5 term analytically.
inline double lifespan_integral(const Lifespan& c, double a) {
  auto f = [&](double s) {
    const double y = a * std::exp(s);
    return y / (c.C4 * std::pow(y, c.rp) + c.C5 * std::pow(y, c.rm));
  };
  const double rmin = std::min(c.rp, c.rm);
  const double S = 60.0 / (rmin - 1.0);
  const int n = 400000;
  const double h = S / n;
  double sum = f(0) + f(S);
  for (int i = 1; i < n; ++i) sum += f(i * h) * (i % 2 ? 4.0 : 2.0);
  const double ye = a * std::exp(S);
  const double tail = std::pow(ye, 1 - rmin) / ((rmin - 1) * (c.rp <= c.rm ? c.C4 : c.C5));
  return sum * h / 3.0 + tail;
}

inline double decay_delta1(double pm, double pp, double B2, double J0, double d) {
  const double d0 = std::pow(J0 / d, (pm - 2) / 2);
  return B2 * pp * (pm - 2) * (1 - d0) / (2 * pm * (pp - 2 * d0));
}

}  // namespace oracle
