#include <cmath>
#include <numbers>

#include "doctest.h"
#include "levykin/diagnostics.hpp"
#include "levykin/equilibrium.hpp"
#include "levykin/errors.hpp"
#include "levykin/solver_lfp.hpp"

using namespace levykin;

namespace {

RecipeConstants example_constants() {
  RecipeConstants k;
  k.C_P = 1.0;
  k.C_F = 1.0;
  k.torus_poincare = 1.0;
  k.K = {{0.1, 10.0}};
  return k;
}

std::pair<std::vector<double>, std::vector<double>> exponential(double C, double lambda, std::size_t n) {
  std::vector<double> t, y;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back(0.25 * static_cast<double>(i));
    y.push_back(C * std::exp(-lambda * t.back()));
  }
  return {t, y};
}

}  // namespace

TEST_CASE("coefficient recipe on hand-checkable constants") {
  const auto k = example_constants();
  const auto r = coefficient_search(k);
  REQUIRE(r.feasible);
  const auto& c = r.coeffs;
  CHECK(c.eps == 0.1);
  CHECK(r.K == 10.0);
  CHECK(c.b < 1.0 / (2.0 * r.K));
  CHECK(c.c > 2.0 * c.b * k.torus_poincare * r.K);
  CHECK(c.a > c.c * c.c * (2.0 + k.C_P / 2.0) / c.b + c.b * k.C_P / 2.0);
  CHECK(c.c * c.c < c.a * c.b);
  // With b = 0.045 the bound on a is about 54.5; the margin lifts it further.
  CHECK(c.a > 54.5);
  CHECK(r.prefactors.all_positive());
  CHECK(r.lambda_cert > 0.0);
  CHECK(r.lambda_cert == doctest::Approx(certified_rate(c, k, r.K)));
  CHECK(recipe_violations(c, k).empty());
}

TEST_CASE("largest admissible eps is chosen") {
  auto k = example_constants();
  k.K = {{0.05, 12.0}, {0.1, 10.0}, {0.2, 8.0}, {0.24, 7.0}};
  // 1.1 x 0.24 exceeds 1/(4 C_F) = 0.25.
  const auto r = coefficient_search(k);
  REQUIRE(r.feasible);
  CHECK(r.coeffs.eps == 0.2);
  CHECK(r.K == 8.0);
}

TEST_CASE("infeasible constants name the binding constraint") {
  auto k = example_constants();
  k.C_F = 10.0;
  const auto r = coefficient_search(k);
  CHECK_FALSE(r.feasible);
  CHECK(r.binding.find("eps") != std::string::npos);
}

TEST_CASE("violations of user coefficients are listed") {
  const auto k = example_constants();
  const auto v = recipe_violations(HypoCoeffs::make(10.0, 0.5, 1.0, 0.1), k);
  CHECK_FALSE(v.empty());
}

TEST_CASE("decay fit of an exact exponential") {
  const auto [t, y] = exponential(3.0, 0.7, 41);
  const auto fit = decay_fit(t, y);
  CHECK(fit.lambda == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(fit.prefactor == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
  CHECK(fit.samples == 41);
  CHECK_FALSE(fit.notice);

  std::vector<double> scaled = y;
  for (double& v : scaled) v *= 5.0;
  const auto fs = decay_fit(t, scaled);
  CHECK(fs.lambda == doctest::Approx(fit.lambda).epsilon(1e-12));
  CHECK(fs.prefactor == doctest::Approx(5.0 * fit.prefactor).epsilon(1e-12));

  const auto w = decay_fit(t, y, std::make_pair(2.0, 8.0));
  CHECK(w.t0 == doctest::Approx(2.0));
  CHECK(w.t1 == doctest::Approx(8.0));
  CHECK(w.samples == 25);
}

TEST_CASE("decay fit truncates at the round-off floor") {
  auto [t, y] = exponential(1.0, 2.0, 80);
  for (std::size_t i = 60; i < y.size(); ++i) y[i] = 0.0;
  const auto fit = decay_fit(t, y);
  CHECK(fit.notice);
  CHECK(fit.samples == 60);
  CHECK(fit.lambda == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("decay fit needs enough samples") {
  const auto [t, y] = exponential(1.0, 1.0, 8);
  CHECK_THROWS_AS(decay_fit(t, y), ValidationError);
}

TEST_CASE("dissipation check") {
  const auto grid = std::make_shared<const VelocityGrid>(VelocityGrid::for_alpha(1.0));
  const auto mu = periodized_equilibrium(1.0, grid);
  const FormContext ctx(mu, 1.0, Derivative::spectral);
  const auto coeffs = HypoCoeffs::make(8.9585, 0.35309, 1.0, 0.1);
  RecipeConstants k;
  k.C_P = 1.557;
  k.C_F = 2.209;
  k.K = {{0.1, 1.288}};
  const auto pre = dissipation_prefactors(coeffs, k, 1.288);
  REQUIRE(pre.all_positive());
  const double lambda = certified_rate(coeffs, k, 1.288);
  const std::size_t m = 8;

  SUBCASE("equilibrium trace") {
    std::vector<std::pair<double, PhaseField>> snaps;
    for (int i = 0; i < 5; ++i) snaps.emplace_back(0.05 * i, PhaseField::separable(m, std::vector<double>(m, 1.0), mu));
    const auto rep = dissipation_check(snaps, coeffs, pre, lambda, ctx);
    REQUIRE(rep.samples.size() == 3);
    for (const auto& s : rep.samples) {
      CHECK(std::abs(s.ddt_half_norm2) < 1e-8);
      CHECK(std::abs(s.dissipation) < 1e-8);
    }
    CHECK(rep.inequality_holds());
  }
  SUBCASE("decaying solution") {
    std::vector<double> rho(m);
    for (std::size_t i = 0; i < m; ++i) rho[i] = 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * i / m);
    std::vector<std::pair<double, PhaseField>> snaps;
    SimOptions o;
    o.dt = 0.05;
    o.t_end = 0.5;
    o.snapshot_every = 1;
    o.on_snapshot = [&](double t, const PhaseField& f) { snaps.emplace_back(t, f); };
    simulate(PhaseField::separable(m, rho, mu), {1.0, 1}, coeffs, ctx, o);
    const auto rep = dissipation_check(snaps, coeffs, pre, lambda, ctx);
    CHECK(rep.samples.size() == snaps.size() - 2);
    CHECK(rep.inequality_holds());
    CHECK(rep.rate_holds());
    CHECK(rep.failing_times().empty());
  }
  SUBCASE("snapshots too far apart") {
    std::vector<std::pair<double, PhaseField>> snaps;
    for (int i = 0; i < 3; ++i) snaps.emplace_back(0.5 * i, PhaseField::separable(m, std::vector<double>(m, 1.0), mu));
    CHECK_THROWS_AS(dissipation_check(snaps, coeffs, pre, lambda, ctx), ValidationError);
  }
}
