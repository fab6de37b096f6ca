#include <benchmark/benchmark.h>

#include <random>

#include "wasstv/diffops.hpp"
#include "wasstv/grid.hpp"

using namespace wasstv;

namespace {

SpaceTimeGrid bench_grid(int n) { return SpaceTimeGrid(n, n, 15); }

CenteredField random_field(const SpaceTimeGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  CenteredField f(g.nt, g.nx, g.ny);
  for (std::size_t p = 0; p < f.size(); ++p) f.data()[p] = d(rng);
  return f;
}

}  // namespace

static void BM_DtForward(benchmark::State& state) {
  const SpaceTimeGrid g = bench_grid(static_cast<int>(state.range(0)));
  const CenteredField rho = random_field(g, 1);
  CenteredField out(g.nt, g.nx, g.ny);
  for (auto _ : state) {
    dt_forward_into(rho, g, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(rho.size()));
}
BENCHMARK(BM_DtForward)->Arg(64)->Arg(128);

static void BM_Divergence(benchmark::State& state) {
  const SpaceTimeGrid g = bench_grid(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  MomentumField m(g);
  for (std::size_t p = 0; p < m.mx.size(); ++p) m.mx.data()[p] = d(rng);
  for (std::size_t p = 0; p < m.my.size(); ++p) m.my.data()[p] = d(rng);
  m.zero_boundary();
  CenteredField out(g.nt, g.nx, g.ny);
  for (auto _ : state) {
    divergence_into(m, g, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(out.size()));
}
BENCHMARK(BM_Divergence)->Arg(64)->Arg(128);

static void BM_DivAdjoint(benchmark::State& state) {
  const SpaceTimeGrid g = bench_grid(static_cast<int>(state.range(0)));
  const CenteredField lam = random_field(g, 3);
  MomentumField out(g);
  for (auto _ : state) {
    div_adjoint_into(lam, g, out);
    benchmark::DoNotOptimize(out.mx.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(lam.size()));
}
BENCHMARK(BM_DivAdjoint)->Arg(64)->Arg(128);
