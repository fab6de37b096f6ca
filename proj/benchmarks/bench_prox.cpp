#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wasstv/solver.hpp"

using namespace wasstv;

static void BM_RhoProx(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rt(-2.0, 5.0);
  std::uniform_real_distribution<double> sd(0.0, 10.0);
  std::vector<double> rts(4096), ss(4096);
  for (std::size_t i = 0; i < rts.size(); ++i) {
    rts[i] = rt(rng);
    ss[i] = sd(rng);
  }
  const double tau = 0.001;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rho_prox(rts[i], ss[i], tau));
    i = (i + 1) & 4095;
  }
}
BENCHMARK(BM_RhoProx);

static void BM_RhoProxZeroMomentum(benchmark::State& state) {
  // The fast path taken by quiescent background cells.
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> rt(-1.0, 1.0);
  std::vector<double> rts(4096);
  for (double& v : rts) v = rt(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rho_prox(rts[i], 0.0, 0.001));
    i = (i + 1) & 4095;
  }
}
BENCHMARK(BM_RhoProxZeroMomentum);
