#include "levykin/solver_bgk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levykin/errors.hpp"
#include "levykin/numerics.hpp"
#include "trace_recorder.hpp"

namespace levykin {
namespace {

void relax_mode(std::vector<cplx>& g, std::span<const double> M, double h, double decay) {
  cplx rho = 0.0;
  for (const auto& z : g) rho += z;
  rho *= h;
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = decay * g[j] + (1.0 - decay) * rho * M[j];
}

void transport_mode(std::vector<cplx>& g, const VelocityGrid& grid, std::size_t k, double tau) {
  if (k == 0) return;
  for (std::size_t j = 0; j < g.size(); ++j) g[j] *= std::polar(1.0, -static_cast<double>(k) * grid.node(j) * tau);
}

}  // namespace

BgkEquilibrium check_hypotheses(const VelocityField& M, const BgkHypothesisOptions& opts) {
  const auto& grid = M.grid();
  if (!M.is_finite()) throw ValidationError("BGK equilibrium: M is not finite");
  if (!M.is_positive()) throw ValidationError("BGK equilibrium: M must be strictly positive");
  const double mass = M.integral();
  if (std::abs(mass - 1.0) > opts.mass_tolerance) {
    throw ValidationError("BGK equilibrium: int M = " + std::to_string(mass) + " is not 1 within " +
                          std::to_string(opts.mass_tolerance));
  }
  auto unit = M;
  unit *= 1.0 / mass;

  const std::size_t n = grid.size();
  std::vector<double> logm(n);
  for (std::size_t i = 0; i < n; ++i) logm[i] = std::log(unit[i]);
  const numerics::FiniteDifference d1(1, opts.fd_accuracy, grid.spacing(), n);
  const auto dlog = d1.apply(logm);

  const double V = grid.extent();
  double inner = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::abs(grid.node(i));
    if (v <= 0.25 * V) inner = std::max(inner, std::abs(dlog[i]));
    else if (v <= 0.5 * V) outer = std::max(outer, std::abs(dlog[i]));
  }
  const double bound = std::max(inner, outer);
  if (!std::isfinite(bound) || bound > opts.log_grad_cap) {
    throw ValidationError("BGK equilibrium: |d_v ln M| reaches " + std::to_string(bound) + " (cap " +
                          std::to_string(opts.log_grad_cap) + ")");
  }
  if (outer > opts.growth_ratio * inner) {
    throw ValidationError("BGK equilibrium: |d_v ln M| keeps growing with |v| (" + std::to_string(inner) + " on |v|<=V/4, " +
                          std::to_string(outer) + " on V/4<|v|<=V/2); the log-gradient is not bounded");
  }
  const double cp = opts.torus_poincare;
  return BgkEquilibrium{std::move(unit), bound, bound * bound * cp * cp};
}

PhaseField bgk_project(const PhaseField& f, const BgkEquilibrium& eq) {
  if (!(f.grid() == eq.M.grid())) throw ValidationError("bgk_project: grid mismatch");
  const std::size_t n = f.grid().size();
  const double h = f.grid().spacing();
  std::vector<double> out(f.values().size());
  for (std::size_t ix = 0; ix < f.x_nodes(); ++ix) {
    const auto row = f.row(ix);
    double rho = 0.0;
    for (double x : row) rho += x;
    rho *= h;
    for (std::size_t j = 0; j < n; ++j) out[ix * n + j] = rho * eq.M[j];
  }
  return PhaseField(f.x_nodes(), f.grid_ptr(), std::move(out));
}

PhaseField bgk_collision_step(const PhaseField& f, const BgkEquilibrium& eq, double dt) {
  if (!(dt >= 0.0)) throw ValidationError("bgk_collision_step: dt must be non-negative");
  if (!(f.grid() == eq.M.grid())) throw ValidationError("bgk_collision_step: grid mismatch");
  const double decay = std::exp(-dt);
  const auto proj = bgk_project(f, eq);
  std::vector<double> out(f.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = decay * f.values()[i] + (1.0 - decay) * proj.values()[i];
  return PhaseField(f.x_nodes(), f.grid_ptr(), std::move(out));
}

HypoCoeffs bgk_recipe(const BgkEquilibrium& eq, double margin, double b) {
  if (!(margin > 1.0) || !(b > 0.0)) throw ValidationError("bgk_recipe: need margin > 1 and b > 0");
  const double cm = eq.C_M;
  const double c = margin * 2.0 * b * std::max(cm, 1e-12);
  const double a = margin * (4.0 * c * c / b + b + cm * c / 2.0);
  return HypoCoeffs::make(a, b, c, 0.0);
}

WeightedL2 bgk_space(const BgkEquilibrium& eq, std::size_t fd_accuracy) {
  return WeightedL2(eq.M, Derivative::finite_difference, fd_accuracy);
}

SimResult simulate_bgk(const PhaseField& f0, const BgkEquilibrium& eq, const HypoCoeffs& coeffs,
                       const SimOptions& opts) {
  if (!coeffs.valid()) throw ValidationError("simulate_bgk: coefficients violate c^2 < ab");
  if (!(opts.dt > 0.0) || !(opts.t_end >= 0.0)) throw ValidationError("simulate_bgk: need dt > 0 and t_end >= 0");
  if (opts.sample_every == 0) throw ValidationError("simulate_bgk: sample_every must be >= 1");
  if (!(f0.grid() == eq.M.grid())) throw ValidationError("simulate_bgk: grid mismatch");
  if (!f0.is_finite()) throw ValidationError("simulate_bgk: initial field is not finite");

  const auto space = bgk_space(eq);
  const auto& grid = f0.grid();
  const double h = grid.spacing();
  const std::size_t m = f0.x_nodes();
  const auto steps = static_cast<std::size_t>(std::llround(opts.t_end / opts.dt));
  const double decay = std::exp(-opts.dt);

  ModeSet state = f0.modes();
  if (m % 2 == 0) std::fill(state.modes[m / 2].begin(), state.modes[m / 2].end(), cplx(0.0));

  SimResult result{SimTrace{}, f0};
  detail::TraceRecorder rec(space, coeffs, opts, result.trace);
  rec.record(0.0, f0.modes());
  if (opts.snapshot_every > 0 && opts.on_snapshot) opts.on_snapshot(0.0, f0);
  const auto nk = static_cast<std::ptrdiff_t>(state.modes.size());
  for (std::size_t step = 1; step <= steps; ++step) {
#pragma omp parallel for schedule(static) num_threads(numerics::thread_count())
    for (std::ptrdiff_t kk = 0; kk < nk; ++kk) {
      const auto k = static_cast<std::size_t>(kk);
      if (2 * k == m) continue;
      auto& g = state.modes[k];
      transport_mode(g, grid, k, 0.5 * opts.dt);
      relax_mode(g, eq.M.values(), h, decay);
      transport_mode(g, grid, k, 0.5 * opts.dt);
    }
    const double t = static_cast<double>(step) * opts.dt;
    if (step % opts.sample_every == 0 || step == steps) rec.record(t, state);
    if (opts.snapshot_every > 0 && opts.on_snapshot && step % opts.snapshot_every == 0) {
      opts.on_snapshot(t, PhaseField::from_modes(state, f0.grid_ptr()));
    }
  }
  result.final_state = PhaseField::from_modes(state, f0.grid_ptr());
  return result;
}

}  // namespace levykin
