#include "wasstv/baseline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wasstv/diffops.hpp"

namespace wasstv {

namespace {

// Power-iteration estimate of ||(K; grad)|| on images.
double image_operator_norm(const SamplingMask& mask, const SpaceTimeGrid& g,
                           int steps = 50) {
  SpatialImage z(g.nx, g.ny);
  std::uint64_t seed = 0x2545f4914f6cdd1dull;
  for (std::size_t p = 0; p < z.size(); ++p) {
    seed ^= seed << 13;
    seed ^= seed >> 7;
    seed ^= seed << 17;
    z.data()[p] = static_cast<double>(seed >> 11) / 9007199254740992.0 - 0.5;
  }
  double lambda_est = 0.0;
  for (int it = 0; it < steps; ++it) {
    const KSpaceData ku = fourier_forward(z, mask);
    SpatialImage w = fourier_adjoint(ku);
    const GradientPair gr = grad_spatial(z, g);
    const SpatialImage ga = grad_adjoint(gr, g);
    double nrm2 = 0.0;
    for (std::size_t p = 0; p < w.size(); ++p) {
      w.data()[p] += ga.data()[p];
      nrm2 += w.data()[p] * w.data()[p];
    }
    const double nrm = std::sqrt(nrm2);
    if (nrm == 0.0) return 0.0;
    lambda_est = nrm;
    for (std::size_t p = 0; p < w.size(); ++p) z.data()[p] = w.data()[p] / nrm;
  }
  return std::sqrt(lambda_est);
}

}  // namespace

TvResult tv_reconstruct(const KSpaceData& f, const TvConfig& cfg,
                        const SpaceTimeGrid& g) {
  if (cfg.alpha_tv <= 0.0)
    throw std::invalid_argument("tv_reconstruct: alpha_tv > 0 required");
  if (cfg.max_iters < 1)
    throw std::invalid_argument("tv_reconstruct: max_iters >= 1 required");
  const int nx = g.nx, ny = g.ny;
  if (f.values.nx() != nx || f.values.ny() != ny)
    throw std::invalid_argument("tv_reconstruct: data shape does not match grid");

  double tau = cfg.tau, sigma = cfg.sigma;
  if (tau <= 0.0 || sigma <= 0.0) {
    const double L = image_operator_norm(f.mask, g);
    tau = sigma = L > 0.0 ? 1.0 / L : 1.0;
  }

  TvResult res;
  res.u = zero_fill_recon(f);
  SpatialImage u_bar = res.u;
  SpatialImage u_new(nx, ny);
  ComplexImage eta(nx, ny);
  eta.fill(0.0);
  GradientPair zeta(nx, ny);
  GradientPair gtmp(nx, ny);
  SpatialImage ka(nx, ny), ga(nx, ny);

  const int log_every = std::max(1, cfg.log_every);
  const double shrink = 1.0 / (1.0 + sigma);

  for (int l = 0; l < cfg.max_iters; ++l) {
    // Dual ascent on the data and TV multipliers.
    const KSpaceData kb = fourier_forward(u_bar, f.mask);
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        if (f.mask.at(i, j))
          eta(i, j) = (eta(i, j) + sigma * (kb.values(i, j) - f.values(i, j))) * shrink;
        else
          eta(i, j) = 0.0;
      }
    }
    grad_spatial_into(u_bar, g, gtmp);
    for (std::size_t p = 0; p < zeta.gx.size(); ++p) {
      const double zx = zeta.gx.data()[p] + sigma * gtmp.gx.data()[p];
      const double zy = zeta.gy.data()[p] + sigma * gtmp.gy.data()[p];
      const double nrm = std::sqrt(zx * zx + zy * zy);
      const double scale = 1.0 / std::max(1.0, nrm / cfg.alpha_tv);
      zeta.gx.data()[p] = zx * scale;
      zeta.gy.data()[p] = zy * scale;
    }

    // Primal descent (G = 0, so the prox is the identity).
    ka = fourier_adjoint(eta);
    grad_adjoint_into(zeta, g, ga);
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < res.u.size(); ++p) {
      const double un = res.u.data()[p] - tau * (ka.data()[p] + ga.data()[p]);
      const double dd = un - res.u.data()[p];
      num += dd * dd;
      den += res.u.data()[p] * res.u.data()[p];
      u_new.data()[p] = un;
    }
    const double rel = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    for (std::size_t p = 0; p < res.u.size(); ++p)
      u_bar.data()[p] = 2.0 * u_new.data()[p] - res.u.data()[p];
    std::swap(res.u, u_new);

    if (!std::isfinite(rel))
      throw std::runtime_error("tv_reconstruct: non-finite iterate at iteration " +
                               std::to_string(l + 1));

    const bool converged = rel <= cfg.rel_tol;
    const bool last = converged || l + 1 == cfg.max_iters;
    if ((l + 1) % log_every == 0 || last) {
      const KSpaceData ku = fourier_forward(res.u, f.mask);
      double res2 = 0.0;
      for (std::size_t p = 0; p < ku.values.size(); ++p)
        res2 += std::norm(ku.values.data()[p] - f.values.data()[p]);
      const GradientPair gr = grad_spatial(res.u, g);
      double tvsum = 0.0;
      for (std::size_t p = 0; p < gr.gx.size(); ++p)
        tvsum += std::sqrt(gr.gx.data()[p] * gr.gx.data()[p] +
                           gr.gy.data()[p] * gr.gy.data()[p]);
      IterationRecord rec;
      rec.iter = l + 1;
      rec.fidelity = 0.5 * res2;
      rec.tv = cfg.alpha_tv * tvsum;
      rec.J = rec.fidelity + rec.tv;
      rec.rel_change = rel;
      res.history.push_back(rec);
    }
    if (converged) break;
  }
  return res;
}

}  // namespace wasstv
