#include "wasstv/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wasstv {

namespace {

struct Ellipse {
  double value;  // additive intensity
  double a, b;   // half-axes along the rotated x/y directions
  double x0, y0;
  double phi_deg;
};

// Standard ten-ellipse table (the [0,1]-range intensity variant).
constexpr Ellipse kHeadEllipses[10] = {
    {1.0, 0.6900, 0.9200, 0.00, 0.0000, 0.0},
    {-0.8, 0.6624, 0.8740, 0.00, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0000, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0000, 18.0},
    {0.1, 0.2100, 0.2500, 0.00, 0.3500, 0.0},
    {0.1, 0.0460, 0.0460, 0.00, 0.1000, 0.0},
    {0.1, 0.0460, 0.0460, 0.00, -0.1000, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.6050, 0.0},
    {0.1, 0.0230, 0.0230, 0.00, -0.6060, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.6050, 0.0},
};

}  // namespace

SpatialImage shepp_logan(int n) {
  if (n < 16) throw std::invalid_argument("shepp_logan: n >= 16 required");
  SpatialImage img(n, n, 0.0);
  const double h = 2.0 / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + i * h;
    for (int j = 0; j < n; ++j) {
      const double y = -1.0 + j * h;
      double v = 0.0;
      for (const Ellipse& e : kHeadEllipses) {
        const double phi = e.phi_deg * M_PI / 180.0;
        const double c = std::cos(phi), s = std::sin(phi);
        const double rx = (x - e.x0) * c + (y - e.y0) * s;
        const double ry = -(x - e.x0) * s + (y - e.y0) * c;
        const double q = (rx / e.a) * (rx / e.a) + (ry / e.b) * (ry / e.b);
        if (q <= 1.0) v += e.value;
      }
      img(i, j) = std::max(0.0, v);
    }
  }
  return img;
}

SpatialImage gaussian_blob(int n, double cx, double cy, double sigma_g,
                           double mass) {
  if (sigma_g <= 0.0) throw std::invalid_argument("gaussian_blob: sigma_g > 0 required");
  const double margin = 3.0 * sigma_g;
  if (cx < margin || cx > 1.0 - margin || cy < margin || cy > 1.0 - margin)
    throw std::invalid_argument(
        "gaussian_blob: center must be at least 3*sigma_g from every edge");
  SpatialImage img(n, n);
  const double h = 1.0 / (n - 1);
  const double inv2s2 = 1.0 / (2.0 * sigma_g * sigma_g);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = i * h;
    for (int j = 0; j < n; ++j) {
      const double y = j * h;
      const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      const double v = std::exp(-r2 * inv2s2);
      img(i, j) = v;
      sum += v;
    }
  }
  const double factor = mass / (sum * h * h);
  for (std::size_t p = 0; p < img.size(); ++p) img.data()[p] *= factor;
  return img;
}

SpatialImage warp_template(const SpatialImage& u, const DeformationSpec& spec) {
  if (std::abs(spec.amp_x) > 0.2 || std::abs(spec.amp_y) > 0.2)
    throw std::invalid_argument("warp_template: |amp| <= 0.2 required");
  const int nx = u.nx(), ny = u.ny();
  SpatialImage out(nx, ny);

  double mass_in = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) mass_in += u.data()[p];

  const double two_pi = 2.0 * M_PI;
  double mass_out = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) / (nx - 1);
    for (int j = 0; j < ny; ++j) {
      const double y = static_cast<double>(j) / (ny - 1);
      // Displacements in index units so a zero-amplitude warp is exact.
      const double di = spec.amp_x * std::sin(two_pi * spec.freq_x * y) * (nx - 1);
      const double dj = spec.amp_y * std::sin(two_pi * spec.freq_y * x) * (ny - 1);
      double si = i - di;
      double sj = j - dj;
      si = std::clamp(si, 0.0, static_cast<double>(nx - 1));
      sj = std::clamp(sj, 0.0, static_cast<double>(ny - 1));
      int i0 = std::min(static_cast<int>(si), nx - 2);
      int j0 = std::min(static_cast<int>(sj), ny - 2);
      const double fi = si - i0;
      const double fj = sj - j0;
      const double v = (1.0 - fi) * ((1.0 - fj) * u(i0, j0) + fj * u(i0, j0 + 1)) +
                       fi * ((1.0 - fj) * u(i0 + 1, j0) + fj * u(i0 + 1, j0 + 1));
      out(i, j) = v;
      mass_out += v;
    }
  }

  const double factor = mass_out > 0.0 ? mass_in / mass_out : 1.0;
  for (std::size_t p = 0; p < out.size(); ++p) out.data()[p] *= factor;
  return out;
}

}  // namespace wasstv
