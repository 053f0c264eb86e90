#include <cmath>
#include <numbers>

#include "doctest.h"
#include "levykin/equilibrium.hpp"
#include "levykin/errors.hpp"
#include "levykin/numerics.hpp"
#include "levykin/solver_lfp.hpp"
#include "levykin/spectral.hpp"
#include "oracles.hpp"

using namespace levykin;

namespace {

GridPtr default_grid(double alpha) { return std::make_shared<const VelocityGrid>(VelocityGrid::for_alpha(alpha)); }

double gaussian(double v) { return std::exp(-0.5 * v * v); }
cplx gaussian_hat(double xi) { return std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * xi * xi); }

double rel_l2(std::span<const cplx> a, std::span<const cplx> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

double rel_l2(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

PhaseField cosine_data(const VelocityField& profile, std::size_t m) {
  std::vector<double> rho(m);
  for (std::size_t i = 0; i < m; ++i) rho[i] = 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * i / m);
  return PhaseField::separable(m, rho, profile);
}

}  // namespace

TEST_CASE("exact homogeneous formula agrees with an ODE oracle") {
  for (double a : {0.5, 1.0, 1.5}) {
    CAPTURE(a);
    for (double xi : {-7.0, -1.3, -0.2, 0.05, 0.9, 4.0}) {
      CAPTURE(xi);
      const auto closed = oracle::homogeneous_mode(gaussian_hat, xi, a, 0.7);
      const auto ode = oracle::homogeneous_mode_rk4(gaussian_hat, xi, a, 0.7, 400);
      CHECK(std::abs(ode - closed) < 1e-10 * std::max(1e-3, std::abs(closed)));
      CHECK(std::abs(oracle::kinetic_mode(gaussian_hat, 0.0, xi, a, 0.7) - closed) < 1e-12);
    }
  }
}

TEST_CASE("exact homogeneous flow on the grid") {
  // A shifted discrete equilibrium has transform e^{-i s xi} muhat(xi) and
  // stays a shifted equilibrium with shift s e^{-t}.
  for (double a : {0.5, 1.0, 1.5}) {
    CAPTURE(a);
    const auto grid = default_grid(a);
    const auto mu = periodized_equilibrium(a, grid);
    const auto shifted = [&](double s) {
      auto hat = spectral::forward(*grid, mu.values());
      for (std::size_t j = 0; j < hat.size(); ++j) hat[j] *= std::polar(1.0, -s * grid->dual_mode(j));
      return VelocityField(grid, spectral::inverse_real(*grid, hat));
    };
    const double t = 0.7;
    const auto g = exact_homogeneous(shifted(3.0), {a, 1}, t);
    CHECK(rel_l2(g.values(), shifted(3.0 * std::exp(-t)).values()) < 1e-9);
    CHECK(rel_l2(exact_homogeneous(shifted(3.0), {a, 1}, 0.0).values(), shifted(3.0).values()) < 1e-13);
  }
}

TEST_CASE("homogeneous flow relaxes to the equilibrium and conserves mass") {
  const auto grid = default_grid(1.0);
  const auto g0 = sample(grid, [](double v) { return oracle::cauchy(v - 3.0); });
  const auto g = exact_homogeneous(g0, {1.0, 1}, 30.0);
  const auto mu = periodized_equilibrium(1.0, grid);
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    m0 += g0[i];
    m1 += g[i];
  }
  CHECK(m1 == doctest::Approx(m0).epsilon(1e-13));
  CHECK(rel_l2(g.values(), ((m1 * grid->spacing()) * mu).values()) < 1e-10);
}

TEST_CASE("splitting reproduces the homogeneous solution") {
  const auto grid = default_grid(1.0);
  const auto mu = periodized_equilibrium(1.0, grid);
  auto g0 = mu;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double v = grid->node(i);
    g0.values()[i] *= 1.0 + v / (2.0 * (1.0 + v * v));
  }
  const auto f0 = PhaseField::separable(4, {1.0, 1.0, 1.0, 1.0}, g0);
  SimOptions opts;
  opts.dt = 0.01;
  opts.t_end = 1.0;
  opts.sample_every = 50;
  const auto r = simulate(f0, {1.0, 1}, HypoCoeffs::make(10.0, 0.2, 0.3), WeightedL2(mu, Derivative::spectral), opts);
  const auto want = exact_homogeneous(g0, {1.0, 1}, 1.0);
  CHECK(rel_l2(r.final_state.row(0), want.values()) < 1e-6);
}

TEST_CASE("Strang splitting is second order against the kinetic oracle") {
  const double T = 1.0;
  for (double a : {1.0, 1.5}) {
    CAPTURE(a);
    const auto grid = default_grid(a);
    const auto mu = periodized_equilibrium(a, grid);
    const auto f0 = cosine_data(mu, 8);
    const auto mode_hat = [a](double xi) { return cplx(0.25 * equilibrium_fourier(xi, a), 0.0); };
    std::vector<cplx> want(grid->size());
    for (std::size_t j = 0; j < grid->size(); ++j) {
      want[j] = oracle::kinetic_mode(mode_hat, 1.0, grid->dual_mode(j), a, T);
    }
    std::vector<double> err;
    for (double dt : {0.1, 0.05, 0.025}) {
      SimOptions o;
      o.dt = dt;
      o.t_end = T;
      o.sample_every = 1000;
      const auto r = simulate(f0, {a, 1}, HypoCoeffs::make(10.0, 0.2, 0.3), WeightedL2(mu, Derivative::spectral), o);
      err.push_back(rel_l2(spectral::forward(*grid, r.final_state.modes().modes[1]), want));
    }
    for (std::size_t i = 1; i < err.size(); ++i) CHECK(std::log2(err[i - 1] / err[i]) == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("transport is an exact group") {
  const auto grid = std::make_shared<const VelocityGrid>(16.0, 256);
  const auto f0 = cosine_data(sample(grid, gaussian), 8);
  const auto a = transport_step(transport_step(f0, 0.3), 0.4);
  const auto b = transport_step(f0, 0.7);
  CHECK(rel_l2(a.values(), b.values()) < 1e-13);
  CHECK(a.mass() == doctest::Approx(f0.mass()).epsilon(1e-13));
  const WeightedL2 w(sample(grid, gaussian));
  double n0 = 0.0, n1 = 0.0;
  for (std::size_t i = 0; i < f0.x_nodes(); ++i) {
    n0 += w.norm2(f0.row(i));
    n1 += w.norm2(b.row(i));
  }
  CHECK(n1 == doctest::Approx(n0).epsilon(1e-12));
}

TEST_CASE("collision step fixes the discrete equilibrium and conserves mass") {
  for (double a : {0.5, 1.0, 1.5}) {
    CAPTURE(a);
    const auto grid = default_grid(a);
    const auto mu = periodized_equilibrium(a, grid);
    const auto eq = PhaseField::separable(4, {1.0, 1.0, 1.0, 1.0}, mu);
    const auto c = collision_step_lfp(eq, {a, 1}, 0.5);
    CHECK(rel_l2(c.values(), eq.values()) < 1e-12);
    const auto f = cosine_data(sample(grid, [](double v) { return oracle::cauchy(v + 2.0); }), 4);
    CHECK(collision_step_lfp(f, {a, 1}, 0.5).mass() == doctest::Approx(f.mass()).epsilon(1e-12));
  }
}

TEST_CASE("simulation trace") {
  const auto grid = default_grid(1.0);
  const auto mu = periodized_equilibrium(1.0, grid);
  SimOptions o;
  o.dt = 0.05;
  o.t_end = 2.0;
  o.sample_every = 2;
  std::size_t samples = 0, snaps = 0;
  o.on_sample = [&](double, const ModeSet&) { ++samples; };
  o.snapshot_every = 10;
  o.on_snapshot = [&](double, const PhaseField&) { ++snaps; };
  const auto r = simulate(cosine_data(mu, 16), {1.0, 1}, HypoCoeffs::make(9.0, 0.35, 1.0, 0.1),
                          WeightedL2(mu, Derivative::spectral), o);
  CHECK(r.trace.size() == 21);
  CHECK(samples == 21);
  CHECK(snaps == 5);
  CHECK(r.trace.times.back() == doctest::Approx(2.0));
  CHECK(r.trace.max_relative_mass_drift() < 1e-12);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace.triple_norm[i] < r.trace.triple_norm[i - 1]);
  CHECK(std::isnan(r.trace.fitted_lambda_running.front()));
  CHECK(r.trace.fitted_lambda_running.back() > 0.0);
}

TEST_CASE("results do not depend on the thread count") {
  const auto grid = default_grid(1.0);
  const auto mu = periodized_equilibrium(1.0, grid);
  SimOptions o;
  o.dt = 0.1;
  o.t_end = 1.0;
  const auto run = [&](int threads) {
    numerics::set_thread_count(threads);
    return simulate(cosine_data(mu, 16), {1.0, 1}, HypoCoeffs::make(9.0, 0.35, 1.0), WeightedL2(mu, Derivative::spectral), o);
  };
  const auto a = run(1);
  const auto b = run(3);
  numerics::set_thread_count(1);
  CHECK(rel_l2(a.final_state.values(), b.final_state.values()) < 1e-12);
  CHECK(rel_l2(a.trace.triple_norm, b.trace.triple_norm) < 1e-12);
}

TEST_CASE("running rate of an exact exponential") {
  std::vector<double> t, y;
  for (int i = 0; i <= 20; ++i) {
    t.push_back(0.5 * i);
    y.push_back(3.0 * std::exp(-0.7 * t.back()));
  }
  CHECK(running_rate(t, y, 1.0) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("invalid inputs") {
  const auto grid = default_grid(1.0);
  const auto mu = periodized_equilibrium(1.0, grid);
  SimOptions o;
  o.dt = -0.1;
  CHECK_THROWS_AS(simulate(cosine_data(mu, 8), {1.0, 1}, HypoCoeffs::make(9.0, 0.35, 1.0),
                           WeightedL2(mu, Derivative::spectral), o),
                  ValidationError);
  CHECK_THROWS_AS(HypoCoeffs::make(1.0, 1.0, 2.0), ValidationError);
}
