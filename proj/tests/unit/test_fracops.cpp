#include <cmath>
#include <numbers>

#include "doctest.h"
#include "levykin/equilibrium.hpp"
#include "levykin/errors.hpp"
#include "levykin/fracops.hpp"
#include "levykin/operator_checks.hpp"
#include "oracles.hpp"

using namespace levykin;

namespace {

GridPtr grid_of(double extent, std::size_t n) { return std::make_shared<const VelocityGrid>(extent, n); }

double dot(const VelocityField& a, const VelocityField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().spacing();
}

// Relative L^2 error on |v| <= V/2.
double inner_error(const VelocityField& got, const std::function<double(double)>& want) {
  double num = 0.0, den = 0.0;
  const auto& g = got.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(g.node(i)) > g.extent() / 2) continue;
    const double w = want(g.node(i));
    num += (got[i] - w) * (got[i] - w);
    den += w * w;
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("kernel constant") {
  CHECK(frac_constant({1.0, 1}).value == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-13));
  CHECK(frac_constant({1.0, 2}).value == doctest::Approx(0.5 / std::numbers::pi).epsilon(1e-13));
  for (double a : {0.3, 0.7, 1.2, 1.8}) {
    for (int d : {1, 2, 3}) {
      CAPTURE(a);
      CAPTURE(d);
      CHECK(frac_constant({a, d}).value == doctest::Approx(oracle::frac_constant(a, d)).epsilon(1e-12));
    }
  }
  // |Gamma(-a/2)| ~ 2/(2 - a) near a = 2, so C_{1,a} ~ 2 - a.
  CHECK(frac_constant({1.999, 1}).value < frac_constant({1.99, 1}).value);
  CHECK(frac_constant({1.999, 1}).value / 0.001 == doctest::Approx(1.0).epsilon(2e-3));
  CHECK_THROWS_AS(frac_constant({2.0, 1}), ValidationError);
  CHECK_THROWS_AS(frac_constant({0.0, 1}), ValidationError);
}

TEST_CASE("half Laplacian of the Cauchy density") {
  // Symbol |xi| e^{-|xi|} inverts to (1 - v^2) / (pi (1 + v^2)^2).
  const auto exact = [](double v) { return (1.0 - v * v) / (std::numbers::pi * (1.0 + v * v) * (1.0 + v * v)); };
  const auto grid = grid_of(64.0, 2048);
  const auto mu = sample(grid, oracle::cauchy);
  PvOptions opts;
  opts.extension = Extension::analytic;
  opts.tail = oracle::cauchy;
  CHECK(inner_error(frac_laplacian_quadrature(mu, {1.0, 1}, opts), exact) < 1e-6);
}

TEST_CASE("Fourier path is self-adjoint and non-negative") {
  const auto grid = grid_of(32.0, 1024);
  const auto probes = band_limited_probes(grid, 6, 7);
  for (double a : {0.5, 1.0, 1.5}) {
    CAPTURE(a);
    for (std::size_t k = 0; k + 1 < probes.size(); ++k) {
      const auto Lf = frac_laplacian_fourier(probes[k], {a, 1});
      const auto Lg = frac_laplacian_fourier(probes[k + 1], {a, 1});
      CHECK(std::abs(dot(Lf, probes[k + 1]) - dot(probes[k], Lg)) < 1e-12 * std::sqrt(dot(Lf, Lf) * dot(Lg, Lg)));
      CHECK(dot(Lf, probes[k]) > 0.0);
    }
  }
}

TEST_CASE("periodic quadrature converges to the Fourier path") {
  for (double a : {0.5, 1.0, 1.5}) {
    CAPTURE(a);
    const auto xv = cross_validate(a, 64.0, {1024, 2048}, 6, 3);
    CHECK(xv.periodic.back() <= 1e-4);
    CHECK(xv.converging());
    // The zero extension sees the whole-line operator; its gap is the
    // periodization effect and stays small but does not vanish.
    CHECK(xv.zero_extension.back() <= 1e-4);
  }
}

TEST_CASE("drift divergence by both methods") {
  const auto grid = grid_of(32.0, 1024);
  const auto g = sample(grid, [](double v) { return std::exp(-0.5 * v * v); });
  const auto exact = [](double v) { return (1.0 - v * v) * std::exp(-0.5 * v * v); };
  CHECK(inner_error(drift_divergence(g, FracMethod::fourier_symbol), exact) < 1e-12);
  CHECK(inner_error(drift_divergence(g, FracMethod::pv_quadrature), exact) < 1e-8);
}

TEST_CASE("Levy-Fokker-Planck operator annihilates the equilibrium") {
  for (double a : {0.5, 1.0, 1.5}) {
    CAPTURE(a);
    const auto ann = equilibrium_annihilation(a, VelocityGrid::for_alpha(a));
    CHECK(ann.residual <= 1e-4);
    CHECK(ann.residual_refined <= ann.residual);
  }
}

TEST_CASE("structure of the operator on probes") {
  for (double a : {0.5, 1.0, 1.5}) {
    CAPTURE(a);
    const auto st = structure_checks(a, std::make_shared<const VelocityGrid>(VelocityGrid::for_alpha(a)), 6, 5);
    CHECK(st.max_mass_defect < 1e-10);
    CHECK(st.min_energy > 0.0);
    CHECK(st.max_scaling_error < 1e-2);
  }
}

TEST_CASE("edge level is reported for the zero extension") {
  const auto grid = grid_of(16.0, 512);
  const auto g = sample(grid, oracle::cauchy);
  PvReport rep;
  frac_laplacian_quadrature(g, {1.0, 1}, {}, &rep);
  CHECK(rep.boundary_warning);
  CHECK(rep.boundary_level == doctest::Approx(oracle::cauchy(grid->node(511)) / oracle::cauchy(0.0)).epsilon(1e-6));
}

TEST_CASE("Fourier path is linear") {
  const auto grid = grid_of(32.0, 1024);
  const auto probes = band_limited_probes(grid, 2, 11);
  const auto sum = 2.0 * probes[0] + probes[1];
  const auto lhs = frac_laplacian_fourier(sum, {1.3, 1});
  const auto rhs = 2.0 * frac_laplacian_fourier(probes[0], {1.3, 1}) + frac_laplacian_fourier(probes[1], {1.3, 1});
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    err = std::max(err, std::abs(lhs[i] - rhs[i]));
    scale = std::max(scale, std::abs(lhs[i]));
  }
  CHECK(err < 1e-14 * scale * static_cast<double>(lhs.size()));
}
