#include <benchmark/benchmark.h>

#include <cmath>

#include "levykin/equilibrium.hpp"
#include "levykin/fracops.hpp"
#include "levykin/spectral.hpp"

using namespace levykin;

namespace {

GridPtr grid_of(benchmark::State& state) {
  return std::make_shared<const VelocityGrid>(64.0, static_cast<std::size_t>(state.range(0)));
}

void BM_EquilibriumDensity(benchmark::State& state) {
  const auto grid = grid_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(equilibrium_density(1.5, grid));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EquilibriumDensity)->RangeMultiplier(2)->Range(1024, 8192)->Complexity();

void BM_FracLaplacianFourier(benchmark::State& state) {
  const auto grid = grid_of(state);
  const auto g = sample(grid, [](double v) { return std::exp(-0.5 * v * v); });
  for (auto _ : state) benchmark::DoNotOptimize(frac_laplacian_fourier(g, {1.0, 1}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FracLaplacianFourier)->RangeMultiplier(2)->Range(1024, 8192)->Complexity(benchmark::oNLogN);

void BM_FracLaplacianQuadrature(benchmark::State& state) {
  const auto grid = grid_of(state);
  const auto g = sample(grid, [](double v) { return std::exp(-0.5 * v * v); });
  for (auto _ : state) benchmark::DoNotOptimize(frac_laplacian_quadrature(g, {1.0, 1}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FracLaplacianQuadrature)->RangeMultiplier(2)->Range(512, 4096)->Complexity(benchmark::oNSquared);

}  // namespace
