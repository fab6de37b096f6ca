#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wasstv/baseline.hpp"
#include "wasstv/diffops.hpp"
#include "wasstv/metrics.hpp"
#include "wasstv/phantom.hpp"

using namespace wasstv;
using namespace testutil;

namespace {

double tv_sum(const SpatialImage& u, const SpaceTimeGrid& g) {
  const GradientPair gr = grad_spatial(u, g);
  double s = 0.0;
  for (std::size_t p = 0; p < gr.gx.size(); ++p)
    s += std::hypot(gr.gx.data()[p], gr.gy.data()[p]);
  return s;
}

double fidelity(const SpatialImage& u, const KSpaceData& f,
                const SpaceTimeGrid& g) {
  const KSpaceData ku = fourier_forward(u, f.mask);
  double s = 0.0;
  for (std::size_t p = 0; p < ku.values.size(); ++p)
    s += std::norm(ku.values.data()[p] - f.values.data()[p]);
  return 0.5 * s;
}

}  // namespace

TEST_CASE("tv_reconstruct: vanishing weight on a full mask recovers the image") {
  const int n = 32;
  const SpaceTimeGrid g(n, n, 2);
  const SpatialImage truth = shepp_logan(n);
  const KSpaceData f = fourier_forward(truth, SamplingMask::full(n, n));
  TvConfig cfg;
  cfg.alpha_tv = 1e-8;
  cfg.max_iters = 200;
  const TvResult res = tv_reconstruct(f, cfg, g);
  CHECK(psnr(res.u, truth) >= 60.0);
}

TEST_CASE("tv_reconstruct: huge weight crushes the variation") {
  const int n = 32;
  const SpaceTimeGrid g(n, n, 2);
  const SpatialImage truth = shepp_logan(n);
  const SamplingMask mask = make_radial_mask(n, n, 6);
  const KSpaceData f = fourier_forward(truth, mask);
  TvConfig cfg;
  cfg.alpha_tv = 1e3;
  cfg.max_iters = 4000;
  const TvResult res = tv_reconstruct(f, cfg, g);
  const double tv_zf = tv_sum(zero_fill_recon(f), g);
  CHECK(tv_sum(res.u, g) <= 1e-3 * tv_zf);
}

TEST_CASE("tv_reconstruct: objective never ends above the initializer") {
  const int n = 24;
  const SpaceTimeGrid g(n, n, 2);
  const SpatialImage truth = shepp_logan(n);
  for (int spokes : {3, 6, 12}) {
    const KSpaceData f = fourier_forward(truth, make_radial_mask(n, n, spokes));
    for (double w : {1e-4, 1e-3, 1e-2}) {
      TvConfig cfg;
      cfg.alpha_tv = w;
      cfg.max_iters = 1500;
      const TvResult res = tv_reconstruct(f, cfg, g);
      const SpatialImage zf = zero_fill_recon(f);
      const double j_final = fidelity(res.u, f, g) + w * tv_sum(res.u, g);
      const double j_init = fidelity(zf, f, g) + w * tv_sum(zf, g);
      CHECK(j_final <= j_init * (1.0 + 1e-10));
      for (std::size_t p = 0; p < res.u.size(); ++p)
        CHECK(std::isfinite(res.u.data()[p]));
      REQUIRE(!res.history.empty());
      CHECK(res.history.back().bb == 0.0);
      CHECK(res.history.back().J ==
            doctest::Approx(j_final).epsilon(1e-10));
    }
  }
}
