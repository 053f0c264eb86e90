// Runs the acceptance criteria and prints one PASS/FAIL line for each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "levykin/diagnostics.hpp"
#include "levykin/equilibrium.hpp"
#include "levykin/errors.hpp"
#include "levykin/fracops.hpp"
#include "levykin/numerics.hpp"
#include "levykin/operator_checks.hpp"
#include "levykin/probes.hpp"
#include "levykin/solver_bgk.hpp"
#include "levykin/solver_lfp.hpp"
#include "levykin/spectral.hpp"
#include "oracles.hpp"

using namespace levykin;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GridPtr default_grid(double alpha) { return std::make_shared<const VelocityGrid>(VelocityGrid::for_alpha(alpha)); }

PhaseField cosine_data(const VelocityField& profile, std::size_t m) {
  std::vector<double> rho(m);
  for (std::size_t i = 0; i < m; ++i) rho[i] = 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * i / m);
  return PhaseField::separable(m, rho, profile);
}

std::size_t breaches(const std::vector<double>& y) {
  std::size_t n = 0;
  for (std::size_t i = 1; i < y.size(); ++i) n += y[i] > y[i - 1] * (1.0 + 1e-9);
  return n;
}

std::string serialize(const SimTrace& tr) {
  std::string s;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    s += fmt("%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", tr.times[i], tr.mass[i], tr.triple_norm[i], tr.h1_norm[i],
             tr.l2_norm[i], tr.fitted_lambda_running[i]);
  }
  return s;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), 1e-300));
  return d;
}

// The LFP default experiment: constants on the sampled equilibrium, the
// coefficient recipe, then the solver on the discrete equilibrium.
struct LfpDefault {
  RecipeResult recipe;
  SimResult sim;
  std::vector<std::pair<double, PhaseField>> snapshots;
  double seconds = 0.0;
};

LfpDefault run_lfp_default(bool keep_snapshots) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = default_grid(1.0);
  const FormContext ctx(equilibrium_density(1.0, grid), 1.0);
  auto recipe = coefficient_search(estimate_constants(ctx, ConstantsOptions{}));
  if (!recipe.feasible) throw NumericalError("recipe infeasible: " + recipe.binding);
  const auto mu = periodized_equilibrium(1.0, grid);
  std::vector<std::pair<double, PhaseField>> snapshots;
  SimOptions o;
  if (keep_snapshots) {
    o.snapshot_every = 1;
    o.on_snapshot = [&](double t, const PhaseField& f) { snapshots.emplace_back(t, f); };
  }
  const WeightedL2 space(mu, Derivative::spectral);
  auto sim = simulate(cosine_data(mu, 64), {1.0, 1}, recipe.coeffs, space, o);
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return LfpDefault{std::move(recipe), std::move(sim), std::move(snapshots), sec};
}

SimResult run_bgk_default() {
  const auto grid = default_grid(1.0);
  const auto eq = check_hypotheses(equilibrium_density(1.0, grid));
  return simulate_bgk(cosine_data(eq.M, 64), eq, bgk_recipe(eq), SimOptions{});
}

std::optional<LfpDefault> g_lfp;  // run 7, reused by 8 and 11

Outcome crit1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = std::make_shared<const VelocityGrid>(64.0, 2048);
  const auto mu = equilibrium_density(1.0, grid);
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double err = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    if (std::abs(grid->node(i)) <= 32.0) err = std::max(err, std::abs(mu[i] - oracle::cauchy(grid->node(i))));
  }
  return {err <= 1e-8 && sec < 1.0, fmt("max error %.2e on |v|<=32, %.3f s", err, sec)};
}

Outcome crit2() {
  const double c1 = frac_constant({1.0, 1}).value, c2 = frac_constant({1.0, 2}).value;
  const double e1 = std::abs(c1 - 1.0 / std::numbers::pi), e2 = std::abs(c2 - 0.5 / std::numbers::pi);
  return {e1 <= 1e-12 && e2 <= 1e-12, fmt("d=1: %.16f (err %.1e), d=2: %.16f (err %.1e)", c1, e1, c2, e2)};
}

Outcome crit3() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (double a : {0.5, 1.0, 1.5}) {
    const std::size_t n = VelocityGrid::for_alpha(a).size();
    const auto xv = cross_validate(a, 64.0, {n / 2, n, 2 * n}, 20, 1);
    ok = ok && xv.periodic[1] <= 1e-4 && xv.converging();
    detail += fmt("a=%.1f periodic %.1e/%.1e/%.1e zero-ext %.1e; ", a, xv.periodic[0], xv.periodic[1], xv.periodic[2],
                  xv.zero_extension[1]);
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {ok && sec < 30.0, detail + fmt("%.1f s", sec)};
}

Outcome crit4() {
  bool ok = true;
  std::string detail;
  for (double a : {0.5, 1.0, 1.5}) {
    const auto ann = equilibrium_annihilation(a, VelocityGrid::for_alpha(a));
    ok = ok && ann.residual <= 1e-4 && ann.residual_refined < ann.residual;
    detail += fmt("a=%.1f %.2e -> %.2e; ", a, ann.residual, ann.residual_refined);
  }
  return {ok, detail};
}

Outcome crit5() {
  bool ok = true;
  std::string detail;
  for (double a : {0.5, 1.0, 1.5}) {
    const auto grid = default_grid(a);
    const FormContext ctx(equilibrium_density(a, grid), a);
    const auto d = decomposition_checks(ctx, 10, 1);
    ok = ok && d.pairs == 10 && d.max_relative_residual <= 1e-3 && d.max_symmetry_defect <= 1e-10 &&
         d.max_skew_defect <= 1e-10 && d.max_diagonal_skew <= 1e-10 && d.min_s_diagonal >= 0.0 &&
         d.max_cauchy_schwarz_excess <= 1e-10;
    detail += fmt("a=%.1f residual %.1e sym %.0e skew %.0e CS %.0e; ", a, d.max_relative_residual,
                  d.max_symmetry_defect, d.max_skew_defect, d.max_cauchy_schwarz_excess);
  }
  return {ok, detail};
}

Outcome crit6() {
  const auto grid = default_grid(1.0);
  const auto mu = periodized_equilibrium(1.0, grid);
  const WeightedL2 space(mu, Derivative::spectral);
  const auto coeffs = HypoCoeffs::make(10.0, 0.2, 0.3);

  auto g0 = mu;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double v = grid->node(i);
    g0.values()[i] *= 1.0 + v / (2.0 * (1.0 + v * v));
  }
  SimOptions o;
  o.dt = 0.01;
  o.t_end = 1.0;
  const auto hom = simulate(PhaseField::separable(4, std::vector<double>(4, 1.0), g0), {1.0, 1}, coeffs, space, o);
  const auto want = exact_homogeneous(g0, {1.0, 1}, 1.0);
  double num = 0.0, den = 0.0;
  const auto row = hom.final_state.row(0);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    num += (row[i] - want[i]) * (row[i] - want[i]);
    den += want[i] * want[i];
  }
  const double hom_err = std::sqrt(num / den);

  // Order against the exact kinetic solution of mode 1.
  const auto mode_hat = [](double xi) { return std::complex<double>(0.25 * equilibrium_fourier(xi, 1.0), 0.0); };
  std::vector<cplx> exact(grid->size());
  for (std::size_t j = 0; j < grid->size(); ++j) exact[j] = oracle::kinetic_mode(mode_hat, 1.0, grid->dual_mode(j), 1.0, 1.0);
  std::vector<double> err;
  for (double dt : {0.1, 0.05, 0.025}) {
    SimOptions s;
    s.dt = dt;
    s.t_end = 1.0;
    s.sample_every = 1000;
    const auto r = simulate(cosine_data(mu, 8), {1.0, 1}, coeffs, space, s);
    const auto hat = spectral::forward(*grid, r.final_state.modes().modes[1]);
    double e = 0.0, n = 0.0;
    for (std::size_t j = 0; j < hat.size(); ++j) {
      e += std::norm(hat[j] - exact[j]);
      n += std::norm(exact[j]);
    }
    err.push_back(std::sqrt(e / n));
  }
  const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
  const bool ok = hom_err <= 1e-6 && std::abs(o1 - 2.0) <= 0.2 && std::abs(o2 - 2.0) <= 0.2;
  return {ok, fmt("homogeneous rel L2 %.1e; Strang orders %.3f, %.3f", hom_err, o1, o2)};
}

Outcome crit7() {
  g_lfp = run_lfp_default(true);
  const auto& tr = g_lfp->sim.trace;
  const auto fit = decay_fit(tr, std::make_pair(1.0, 10.0));
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.times[i] < 1.0 - 1e-12) continue;
    lo = std::min(lo, std::log(tr.triple_norm[i]));
    hi = std::max(hi, std::log(tr.triple_norm[i]));
  }
  const double rel_residual = fit.residual / (hi - lo);
  const double drift = tr.max_relative_mass_drift();
  const std::size_t b = breaches(tr.triple_norm);
  const bool ok = b == 0 && fit.lambda > 0.0 && rel_residual <= 0.05 && drift <= 1e-10 && g_lfp->seconds < 120.0;
  const auto& c = g_lfp->recipe.coeffs;
  return {ok, fmt("coeffs (%.4g, %.4g, %.4g, eps %.2g), breaches %zu, lambda %.4f, residual/log-range %.1e, "
                  "mass drift %.1e, %.1f s",
                  c.a, c.b, c.c, c.eps, b, fit.lambda, rel_residual, drift, g_lfp->seconds)};
}

Outcome crit8() {
  if (!g_lfp) return {false, "run 7 unavailable"};
  const auto grid = default_grid(1.0);
  const FormContext ctx(periodized_equilibrium(1.0, grid), 1.0, Derivative::spectral);
  const auto& r = g_lfp->recipe;
  const auto rep = dissipation_check(g_lfp->snapshots, r.coeffs, r.prefactors, r.lambda_cert, ctx);
  double worst = -INFINITY;
  for (const auto& s : rep.samples) worst = std::max(worst, (s.ddt_half_norm2 + s.dissipation) / s.norm2);
  g_lfp->snapshots.clear();
  return {rep.inequality_holds(),
          fmt("%zu interior snapshots, max (ddt + D)/|||f|||^2 = %.3f, D >= lambda_cert |||f|||^2 %s", rep.samples.size(),
              worst, rep.rate_holds() ? "holds" : "fails")};
}

Outcome crit9() {
  const auto grid = default_grid(1.0);
  const auto eq = check_hypotheses(equilibrium_density(1.0, grid));
  const auto g = sample(grid, [](double v) { return oracle::cauchy(v - 2.0); });
  SimOptions o;
  o.t_end = 6.0;
  const auto hom = simulate_bgk(PhaseField::separable(4, std::vector<double>(4, 1.0), g), eq, bgk_recipe(eq), o);
  const double rate = decay_fit(hom.trace, std::make_pair(1.0, 6.0)).lambda;

  const auto inh = run_bgk_default();
  const auto fit = decay_fit(inh.trace, std::make_pair(1.0, 10.0));
  const std::size_t b = breaches(inh.trace.triple_norm);

  std::string gate = "accepted";
  bool rejected = false;
  try {
    const auto big = std::make_shared<const VelocityGrid>(32.0, 1024);
    check_hypotheses(sample(big, [](double v) { return std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi); }));
  } catch (const ValidationError& e) {
    rejected = true;
    gate = e.what();
  }
  const bool ok = std::abs(rate - 1.0) <= 1e-6 && b == 0 && fit.lambda > 0.0 && rejected;
  return {ok, fmt("homogeneous rate %.9f; inhomogeneous lambda %.4f, breaches %zu; Gaussian on V=32: %s", rate,
                  fit.lambda, b, gate.c_str())};
}

Outcome crit10() {
  const auto grid = default_grid(1.0);
  const FormContext ctx(equilibrium_density(1.0, grid), 1.0);
  ConstantsOptions o;
  const auto a = estimate_constants(ctx, o);
  o.family_size = 128;
  const auto b = estimate_constants(ctx, o);
  bool ok = true;
  const auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  ok = ok && positive(a.C_P()) && positive(a.C_R()) && positive(a.C_F()) && a.C_F() >= a.C_P();
  double drift = 0.0;
  const auto rel = [](double x, double y) { return std::abs(y - x) / x; };
  drift = std::max({rel(a.C_P(), b.C_P()), rel(a.C_R(), b.C_R()), rel(a.C_F(), b.C_F())});
  bool monotone = true;
  for (std::size_t i = 0; i < a.interpolation.size(); ++i) {
    ok = ok && positive(a.interpolation[i].second.value);
    drift = std::max(drift, rel(a.interpolation[i].second.value, b.interpolation[i].second.value));
    if (i > 0) monotone = monotone && a.interpolation[i].second.value <= a.interpolation[i - 1].second.value;
  }
  ok = ok && drift <= 0.1 && monotone;
  return {ok, fmt("C_P %.4f C_R %.4f C_F %.4f K %.4f/%.4f/%.4f; doubling drift %.1f%%", a.C_P(), a.C_R(), a.C_F(),
                  a.interpolation[0].second.value, a.interpolation[1].second.value, a.interpolation[2].second.value,
                  100.0 * drift)};
}

Outcome crit11() {
  if (!g_lfp) return {false, "run 7 unavailable"};
  const auto lfp_again = run_lfp_default(false);
  const bool lfp_same = serialize(lfp_again.sim.trace) == serialize(g_lfp->sim.trace);
  const auto bgk1 = run_bgk_default();
  const auto bgk2 = run_bgk_default();
  const bool bgk_same = serialize(bgk1.trace) == serialize(bgk2.trace);

  const int threads = numerics::thread_count();
  numerics::set_thread_count(threads == 1 ? 2 : 1);
  const auto lfp_t = run_lfp_default(false);
  const auto bgk_t = run_bgk_default();
  numerics::set_thread_count(threads);
  const double d_lfp = max_rel_diff(lfp_t.sim.trace.triple_norm, g_lfp->sim.trace.triple_norm);
  const double d_bgk = max_rel_diff(bgk_t.trace.triple_norm, bgk1.trace.triple_norm);
  const bool ok = lfp_same && bgk_same && d_lfp <= 1e-12 && d_bgk <= 1e-12;
  return {ok, fmt("repeat byte-identical: lfp %s, bgk %s; thread-count change max rel diff lfp %.1e, bgk %.1e",
                  lfp_same ? "yes" : "no", bgk_same ? "yes" : "no", d_lfp, d_bgk)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"equilibrium closed form", crit1},
      {"kernel constant", crit2},
      {"operator cross-validation", crit3},
      {"equilibrium annihilation", crit4},
      {"decomposition identity", crit5},
      {"exact homogeneous oracle and Strang order", crit6},
      {"hypocoercive decay (LFP)", crit7},
      {"entropy-dissipation inequality", crit8},
      {"BGK exactness", crit9},
      {"constant estimators", crit10},
      {"determinism", crit11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failed += !out.pass;
    std::printf("%s %2zu %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
