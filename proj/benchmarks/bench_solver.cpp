#include <benchmark/benchmark.h>

#include "wasstv/forward.hpp"
#include "wasstv/phantom.hpp"
#include "wasstv/solver.hpp"

using namespace wasstv;

// Whole-iteration cost of the reconstruction loop at the working size.
static void BM_ReconstructIterations(benchmark::State& state) {
  const int n = 64;
  const SpaceTimeGrid g(n, n, 15);
  const SpatialImage truth = shepp_logan(n);
  DeformationSpec warp;
  warp.amp_x = warp.amp_y = 0.05;
  warp.freq_x = warp.freq_y = 2;
  const SpatialImage tmpl = warp_template(truth, warp);
  const KSpaceData f = fourier_forward(truth, make_radial_mask(n, n, 15));

  SolverConfig cfg;
  cfg.nt = g.nt;
  cfg.max_iters = static_cast<int>(state.range(0));
  cfg.rel_tol = 0.0;
  cfg.log_every = 1 << 20;
  cfg.threads = static_cast<int>(state.range(1));

  for (auto _ : state) {
    auto [st, diag] = reconstruct(f, tmpl, cfg, g);
    benchmark::DoNotOptimize(st.rho.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReconstructIterations)
    ->Args({50, 1})
    ->Args({50, 4})
    ->Unit(benchmark::kMillisecond);

static void BM_GeodesicIterations(benchmark::State& state) {
  const int n = 64;
  const SpaceTimeGrid g(n, n, 15);
  const SpatialImage mu = gaussian_blob(n, 0.35, 0.5, 0.06, 1.0);
  const SpatialImage nu = gaussian_blob(n, 0.60, 0.5, 0.06, 1.0);
  SolverConfig cfg;
  cfg.nt = g.nt;
  cfg.max_iters = static_cast<int>(state.range(0));
  cfg.rel_tol = 0.0;
  cfg.log_every = 1 << 20;
  for (auto _ : state) {
    auto [st, diag] = transport_geodesic(mu, nu, cfg, g);
    benchmark::DoNotOptimize(st.rho.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeodesicIterations)->Arg(50)->Unit(benchmark::kMillisecond);
