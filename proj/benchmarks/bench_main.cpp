#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "rdexact/catalog.hpp"
#include "rdexact/chain.hpp"
#include "rdexact/elliptic.hpp"
#include "rdexact/simulate.hpp"
#include "rdexact/verify.hpp"

using namespace rdexact;

static void BM_Jacobi(benchmark::State& state) {
  const elliptic::Modulus m(chain::kModulus);
  double y = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(elliptic::jacobi(y, m));
    y += 0.37;
    if (y > 100.0) y = 0.1;
  }
}
BENCHMARK(BM_Jacobi);

static void BM_Weierstrass(benchmark::State& state) {
  const elliptic::Weierstrass w({0.0, 100.0});
  double z = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(w(z));
    z += 0.013;
    if (z > 1.3) z = 0.05;
  }
}
BENCHMARK(BM_Weierstrass);

static void BM_ChainElement(benchmark::State& state) {
  const chain::PhiState p = chain::phi_chain(static_cast<int>(state.range(0)));
  double y = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p(y));
    y += 0.011;
    if (y > 7.0) y = 0.3;
  }
}
BENCHMARK(BM_ChainElement)->DenseRange(0, 6, 2);

static void BM_Residual(benchmark::State& state) {
  const Sampler u1 = catalog::fisher_family(catalog::FisherVariant::u1, {}, false);
  const int n = static_cast<int>(state.range(0));
  const verify::Grid2D g{-20, 20, n, 0, 5, n / 2 + 1};
  for (auto _ : state) benchmark::DoNotOptimize(verify::pde_residual(u1, Fisher{}, g));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n) * (n / 2 + 1));
}
BENCHMARK(BM_Residual)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

static void BM_FisherIntegration(benchmark::State& state) {
  const Sampler u1 = catalog::fisher_family(catalog::FisherVariant::u1, {}, false);
  simulate::SimConfig c;
  c.x_min = -20.0;
  c.x_max = 20.0;
  c.n_x = static_cast<int>(state.range(0));
  c.t1 = 0.25;
  for (auto _ : state) benchmark::DoNotOptimize(simulate::integrate(Fisher{}, u1, c));
}
BENCHMARK(BM_FisherIntegration)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
