#pragma once

// Image pipelines: sharpening and contrast enhancement with the thin-film
// model, plus linear backward diffusion and a shock filter for comparison.
// Pixels are interior nodes with unit spacing; the zero frame is the ghost
// layer, not part of the image.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "thinfilm/evolve.hpp"
#include "thinfilm/pgm.hpp"

namespace thinfilm {

inline Field image_to_field(const ImageGray& img) {
  require(img.width >= 4 && img.height >= 4, "image must be at least 4x4 pixels");
  const Grid2D g(img.width + 1.0, img.height + 1.0, img.width, img.height);
  return Field(g, img.pixels);
}

/// No clamping here; the PGM writer clamps.
inline ImageGray field_to_image(const Field& u) {
  ImageGray img(u.grid().nx(), u.grid().ny());
  std::copy(u.values().begin(), u.values().end(), img.pixels.begin());
  return img;
}

inline ImageGray clamped(ImageGray img) {
  for (double& v : img.pixels) v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
  return img;
}

/// p = min{3.5, 3 + 0.1 |grad u0|^{1/4}} on every node.
inline ExponentField build_exponent_from_image(const Field& u0) {
  NodeArray p = gradient_magnitude_sq(u0);
  for (double& v : p.values()) v = std::min(3.5, 3.0 + 0.1 * std::pow(v, 0.125));
  return ExponentField(std::move(p));
}

struct SharpenRecipe {
  double dt = 5e-4;
  double alpha = -0.75;
  double s = 0.9;
  double k_scale = 0.1;  // k(t) = k_scale * k_base^{k_rate t}
  double k_base = 5.0;
  double k_rate = 9.0;
  double t_stop = 0.025;

  CoefficientSchedule schedule() const { return CoefficientSchedule::power_of_base(k_scale, k_base, k_rate); }
};

struct ImageRun {
  ImageGray image;  // unclamped
  SimulationOutcome outcome;
};

inline ImageRun evolve_image(const ImageGray& img, const SharpenRecipe& r, double source_lambda) {
  require(source_lambda >= 0.0, "source coefficient must be nonnegative");
  const Field u0 = image_to_field(img);
  SimulationConfig cfg(build_exponent_from_image(u0), r.schedule());
  cfg.alpha = r.alpha;
  cfg.s = r.s;
  cfg.dt = r.dt;
  cfg.t_end = r.t_stop;
  cfg.source_lambda = source_lambda;
  cfg.blowup_threshold = 1e8;
  SimulationOutcome out = run(u0, cfg);
  if (out.status == RunStatus::blew_up) throw Error(ErrorKind::invalid_argument, "sharpening diverged: reduce t_stop or k");
  if (out.status == RunStatus::indefinite_denominator)
    throw Error(ErrorKind::indefinite_denominator, "indefinite denominator: reduce the time step");
  ImageGray result = field_to_image(*out.final_field);
  return {std::move(result), std::move(out)};
}

inline ImageRun sharpen(const ImageGray& img, const SharpenRecipe& r = {}) { return evolve_image(img, r, 0.0); }

inline ImageRun enhance_contrast(const ImageGray& img, const SharpenRecipe& r, double lambda) {
  return evolve_image(img, r, lambda);
}

/// u_t + eps Delta^2 u = -Delta u: each sine mode is multiplied by
/// (1 + dt lambda)/(1 + dt eps lambda^2) per step.
inline ImageGray linear_backward_diffusion(const ImageGray& img, double eps = 1e-3, double dt = 1e-3,
                                           double t_stop = 0.2, double blowup_threshold = 1e8) {
  require(eps > 0.0 && dt > 0.0 && t_stop >= 0.0, "backward diffusion needs eps > 0, dt > 0, t_stop >= 0");
  Field u = image_to_field(img);
  const Grid2D& g = u.grid();
  const SymbolTable sym(g, 0.0, 0.5);
  std::vector<double> factor(g.interior_size());
  for (std::size_t k = 0; k < factor.size(); ++k)
    factor[k] = (1.0 + dt * sym.lambda()[k]) / (1.0 + dt * eps * sym.lambda_sq()[k]);
  const long n = std::lround(t_stop / dt);
  for (long step = 0; step < n; ++step) {
    SpectralField v = dst_forward(u);
    auto c = v.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= factor[k];
    u = dst_inverse(v);
    if (!(u.max_abs() <= blowup_threshold)) throw Error(ErrorKind::invalid_argument, "backward diffusion diverged");
  }
  return field_to_image(u);
}

enum class ShockGradient { central, upwind };

/// u_t = -(|grad u|/(1+|Delta u|)) Delta u by explicit Euler. Delta u is the
/// 5-point Laplacian; |grad u| is central by default, or the Osher-Sethian
/// upwind magnitude chosen by the sign of the speed.
inline ImageGray shock_filter(const ImageGray& img, double dt = 0.1, double t_stop = 0.5,
                              ShockGradient scheme = ShockGradient::central, double blowup_threshold = 1e8) {
  require(dt > 0.0 && t_stop >= 0.0, "shock filter needs dt > 0, t_stop >= 0");
  Field u = image_to_field(img);
  const Grid2D& g = u.grid();
  const long n = std::lround(t_stop / dt);
  for (long step = 0; step < n; ++step) {
    Field next(g);
    for (int j = 1; j <= g.ny(); ++j) {
      for (int i = 1; i <= g.nx(); ++i) {
        const double c = u(i, j);
        const double e = u(i + 1, j), w = u(i - 1, j), nn = u(i, j + 1), sd = u(i, j - 1);
        const double lap = e + w + nn + sd - 4.0 * c;
        const double a = lap / (1.0 + std::abs(lap));
        const double dxm = c - w, dxp = e - c, dym = c - sd, dyp = nn - c;
        double g2;
        if (scheme == ShockGradient::central) {
          g2 = 0.25 * ((e - w) * (e - w) + (nn - sd) * (nn - sd));
        } else if (a > 0.0) {
          g2 = std::pow(std::max(dxm, 0.0), 2) + std::pow(std::min(dxp, 0.0), 2) + std::pow(std::max(dym, 0.0), 2) +
               std::pow(std::min(dyp, 0.0), 2);
        } else {
          g2 = std::pow(std::min(dxm, 0.0), 2) + std::pow(std::max(dxp, 0.0), 2) + std::pow(std::min(dym, 0.0), 2) +
               std::pow(std::max(dyp, 0.0), 2);
        }
        next.interior(i, j) = c - dt * a * std::sqrt(g2);
      }
    }
    u = std::move(next);
    if (!(u.max_abs() <= blowup_threshold)) throw Error(ErrorKind::invalid_argument, "shock filter diverged");
  }
  return field_to_image(u);
}

// ---------------------------------------------------------------------------
// Metrics

/// Pixel mask, row-major like ImageGray.
using Mask = std::vector<char>;

/// Max central-difference gradient magnitude over the masked pixels.
inline double max_gradient(const ImageGray& img, const Mask& mask) {
  const NodeArray g2 = gradient_magnitude_sq(image_to_field(img));
  double m = 0.0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      if (mask[std::size_t(y) * img.width + x]) m = std::max(m, g2(x + 1, y + 1));
  return std::sqrt(m);
}

inline double masked_variance(const ImageGray& img, const Mask& mask) {
  double sum = 0.0, sum2 = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < img.pixels.size(); ++k) {
    if (!mask[k]) continue;
    sum += img.pixels[k];
    ++n;
  }
  require(n > 1, "mask selects too few pixels");
  const double mean = sum / double(n);
  for (std::size_t k = 0; k < img.pixels.size(); ++k)
    if (mask[k]) sum2 += (img.pixels[k] - mean) * (img.pixels[k] - mean);
  return sum2 / double(n);
}

/// Mean absolute deviation from the global mean.
inline double contrast(const ImageGray& img) {
  const double mean = std::accumulate(img.pixels.begin(), img.pixels.end(), 0.0) / double(img.pixels.size());
  double s = 0.0;
  for (double v : img.pixels) s += std::abs(v - mean);
  return s / double(img.pixels.size());
}

struct ImageRange {
  double lo = 0.0, hi = 0.0;
};

inline ImageRange value_range(const ImageGray& img) {
  auto [lo, hi] = std::minmax_element(img.pixels.begin(), img.pixels.end());
  return {*lo, *hi};
}

struct RegionMasks {
  Mask edge;
  Mask flat;
};

/// Edge pixels: within `reach` (Chebyshev) of a pixel whose gradient is at
/// least half the maximum. Flat pixels: farther than 2*reach from any such
/// pixel. Both exclude a `margin`-wide band along the frame.
inline RegionMasks derive_region_masks(const ImageGray& img, int reach = 6, int margin = 8) {
  const int w = img.width, h = img.height;
  const NodeArray g2 = gradient_magnitude_sq(image_to_field(img));
  double gmax = 0.0;
  for (int y = margin; y < h - margin; ++y)
    for (int x = margin; x < w - margin; ++x) gmax = std::max(gmax, g2(x + 1, y + 1));
  // Chebyshev distance to the seed set, two-pass.
  const int inf = w + h;
  std::vector<int> d(std::size_t(w) * h, inf);
  auto at = [&](int x, int y) -> int& { return d[std::size_t(y) * w + x]; };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (gmax > 0.0 && g2(x + 1, y + 1) >= 0.25 * gmax) at(x, y) = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int dy = -1; dy <= 0; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dy == 0 && dx >= 0) continue;
          const int xx = x + dx, yy = y + dy;
          if (xx >= 0 && xx < w && yy >= 0) at(x, y) = std::min(at(x, y), at(xx, yy) + 1);
        }
  for (int y = h - 1; y >= 0; --y)
    for (int x = w - 1; x >= 0; --x)
      for (int dy = 0; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dy == 0 && dx <= 0) continue;
          const int xx = x + dx, yy = y + dy;
          if (xx >= 0 && xx < w && yy < h) at(x, y) = std::min(at(x, y), at(xx, yy) + 1);
        }
  RegionMasks m{Mask(d.size(), 0), Mask(d.size(), 0)};
  for (int y = margin; y < h - margin; ++y) {
    for (int x = margin; x < w - margin; ++x) {
      const std::size_t k = std::size_t(y) * w + x;
      m.edge[k] = at(x, y) <= reach;
      m.flat[k] = at(x, y) > 2 * reach;
    }
  }
  return m;
}

struct FilterMetrics {
  double edge_gain = 0.0;
  double flat_variance_ratio = 0.0;
  ImageRange range;
};

inline FilterMetrics compare_metrics(const ImageGray& input, const ImageGray& output, const RegionMasks& masks) {
  FilterMetrics m;
  m.edge_gain = max_gradient(output, masks.edge) / max_gradient(input, masks.edge);
  m.flat_variance_ratio = masked_variance(output, masks.flat) / masked_variance(input, masks.flat);
  m.range = value_range(output);
  return m;
}

struct SyntheticEdge {
  ImageGray image;
  RegionMasks masks;
};

/// Two half-planes 0.25 | 0.75 split along x at width/2 with a 3-pixel
/// linear ramp, plus Gaussian noise of standard deviation sigma away from
/// the ramp.
inline SyntheticEdge synthetic_step_edge(int width, int height, double sigma, std::uint64_t seed) {
  require(width >= 32 && height >= 32, "synthetic edge needs at least 32x32 pixels");
  SyntheticEdge s{ImageGray(width, height), {}};
  const int c0 = width / 2;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v;
      if (x < c0 - 1) v = 0.25;
      else if (x > c0 + 1) v = 0.75;
      else v = 0.25 + 0.5 * double(x - (c0 - 2)) / 4.0;
      const double n = noise(rng);
      if (std::abs(x - c0) > 3) v += sigma * n;
      s.image.at(x, y) = v;
    }
  }
  const std::size_t np = s.image.pixels.size();
  s.masks.edge.assign(np, 0);
  s.masks.flat.assign(np, 0);
  for (int y = 8; y < height - 8; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t k = std::size_t(y) * width + x;
      s.masks.edge[k] = x >= c0 - 6 && x < c0 + 6;
      s.masks.flat[k] = x >= 8 && x < c0 - 8;
    }
  }
  return s;
}

}  // namespace thinfilm
