#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "levykin/equilibrium.hpp"
#include "levykin/solver_bgk.hpp"
#include "levykin/solver_lfp.hpp"

using namespace levykin;

namespace {

PhaseField cosine_data(const VelocityField& profile, std::size_t m) {
  std::vector<double> rho(m);
  for (std::size_t i = 0; i < m; ++i) rho[i] = 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * i / m);
  return PhaseField::separable(m, rho, profile);
}

// Ten steps of dt = 0.05 on m x-modes.
void BM_LfpSteps(benchmark::State& state) {
  const auto grid = std::make_shared<const VelocityGrid>(VelocityGrid::for_alpha(1.0));
  const auto mu = periodized_equilibrium(1.0, grid);
  const WeightedL2 space(mu, Derivative::spectral);
  const auto f0 = cosine_data(mu, static_cast<std::size_t>(state.range(0)));
  SimOptions o;
  o.t_end = 0.5;
  o.sample_every = 10;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(f0, {1.0, 1}, HypoCoeffs::make(10.0, 0.2, 0.3), space, o));
}
BENCHMARK(BM_LfpSteps)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BgkSteps(benchmark::State& state) {
  const auto grid = std::make_shared<const VelocityGrid>(VelocityGrid::for_alpha(1.0));
  const auto eq = check_hypotheses(equilibrium_density(1.0, grid));
  const auto coeffs = bgk_recipe(eq);
  const auto f0 = cosine_data(eq.M, static_cast<std::size_t>(state.range(0)));
  SimOptions o;
  o.t_end = 0.5;
  o.sample_every = 10;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_bgk(f0, eq, coeffs, o));
}
BENCHMARK(BM_BgkSteps)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
