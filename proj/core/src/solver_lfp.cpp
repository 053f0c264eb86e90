#include "levykin/solver_lfp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "levykin/equilibrium.hpp"
#include "levykin/errors.hpp"
#include "levykin/numerics.hpp"
#include "levykin/spectral.hpp"
#include "trace_recorder.hpp"

namespace levykin {
namespace {

constexpr std::size_t kInterpWidth = 8;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double abs_pow(double x, double alpha) {
  const double a = std::abs(x);
  if (alpha == 1.0) return a;
  if (alpha == 0.5) return std::sqrt(a);
  if (alpha == 1.5) return a * std::sqrt(a);
  return std::pow(a, alpha);
}

// Values on the dual grid re-ordered by increasing frequency, with local
// Lagrange interpolation; outside the band the edge value is held.
class DualInterpolator {
 public:
  DualInterpolator(const VelocityGrid& grid, std::span<const cplx> fft_ordered)
      : n_(grid.size()), dxi_(grid.dual_spacing()), sorted_(n_) {
    for (std::size_t t = 0; t < n_; ++t) sorted_[t] = fft_ordered[(t + n_ / 2) % n_];
  }

  [[nodiscard]] cplx operator()(double xi) const {
    const double x0 = -static_cast<double>(n_ / 2) * dxi_;
    const double pos = (xi - x0) / dxi_;
    if (pos <= 0.0) return sorted_.front();
    if (pos >= static_cast<double>(n_ - 1)) return sorted_.back();
    const double r = pos - std::round(pos);
    if (std::abs(r) < 1e-13) return sorted_[static_cast<std::size_t>(std::llround(pos))];
    const auto st = numerics::lagrange_stencil(xi, x0, dxi_, n_, kInterpWidth);
    cplx s = 0.0;
    for (std::size_t a = 0; a < st.weights.size(); ++a) s += st.weights[a] * sorted_[st.start + a];
    return s;
  }

 private:
  std::size_t n_;
  double dxi_;
  std::vector<cplx> sorted_;
};

std::vector<cplx> collide_profile(const VelocityGrid& grid, std::span<const cplx> profile, double alpha, double dt) {
  auto hat = spectral::forward(grid, profile);
  const std::size_t n = grid.size();
  std::vector<cplx> q(n);
  for (std::size_t j = 0; j < n; ++j) q[j] = hat[j] / equilibrium_fourier(grid.dual_mode(j), alpha);
  const DualInterpolator interp(grid, q);
  const double contract = std::exp(-dt);
  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double xi = grid.dual_mode(j);
    out[j] = j == 0 ? hat[0] : interp(xi * contract) * equilibrium_fourier(xi, alpha);
  }
  return spectral::inverse(grid, out);
}

// Spectral state of one x-mode under the composed flows.
class ModeState {
 public:
  ModeState(const VelocityGrid& grid, std::size_t k, std::span<const cplx> profile, double alpha)
      : k_(static_cast<double>(k)), alpha_(alpha), q0_(grid, quotient(grid, profile, alpha)) {}

  void transport(double tau) {
    s_ += p_ * k_ * tau;
    for (auto& t : terms_) t.s += t.p * k_ * tau;
  }

  void collide(double dt) {
    const double e = std::exp(-dt);
    p_ *= e;
    const double gamma = -std::expm1(-alpha_ * dt) / alpha_;
    if (k_ == 0.0) {
      // All shifts vanish: the multipliers merge into one |xi|^alpha term.
      merged_ = merged_ * std::exp(-alpha_ * dt) + gamma;
      return;
    }
    for (auto& t : terms_) t.p *= e;
    terms_.push_back({gamma, 1.0, 0.0});
  }

  [[nodiscard]] std::vector<cplx> spectrum(const VelocityGrid& grid) const {
    const std::size_t n = grid.size();
    std::vector<cplx> out(n);
    const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) num_threads(numerics::thread_count())
    for (std::ptrdiff_t jj = 0; jj < nn; ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      const double xi = grid.dual_mode(j);
      const double eta = p_ * xi + s_;
      double expo = merged_ * abs_pow(xi, alpha_);
      for (const auto& t : terms_) expo += t.gamma * abs_pow(t.p * xi + t.s, alpha_);
      const cplx g0 = (eta == 0.0 ? q0_(0.0) : q0_(eta)) * equilibrium_fourier(eta, alpha_);
      out[j] = g0 * std::exp(-expo);
    }
    return out;
  }

 private:
  struct Term {
    double gamma, p, s;
  };

  static std::vector<cplx> quotient(const VelocityGrid& grid, std::span<const cplx> profile, double alpha) {
    auto hat = spectral::forward(grid, profile);
    for (std::size_t j = 0; j < hat.size(); ++j) hat[j] /= equilibrium_fourier(grid.dual_mode(j), alpha);
    return hat;
  }

  double k_;
  double alpha_;
  DualInterpolator q0_;
  double p_ = 1.0;
  double s_ = 0.0;
  double merged_ = 0.0;
  std::vector<Term> terms_;
};

}  // namespace

namespace detail {

void TraceRecorder::record(double t, const ModeSet& modes) {
  double s = 0.0;
  for (const auto& z : modes.modes[0]) s += z.real();
  const auto dev = equilibrium_deviation(modes, space_);
  const auto norms = phase_norms(dev, space_);
  const double triple = std::sqrt(std::max(0.0, norms.triple(coeffs_)));
  trace_.times.push_back(t);
  trace_.mass.push_back(2.0 * std::numbers::pi * s * space_.grid().spacing());
  trace_.triple_norm.push_back(triple);
  trace_.h1_norm.push_back(std::sqrt(norms.h1()));
  trace_.l2_norm.push_back(std::sqrt(norms.l2));
  trace_.dissipation_estimate.push_back(opts_.dissipation ? opts_.dissipation(dev) : kNaN);
  trace_.fitted_lambda_running.push_back(running_rate(trace_.times, trace_.triple_norm, opts_.fit_from));
  if (trace_.size() == 1) initial_ = triple;
  if (!std::isfinite(triple) || triple > opts_.blowup_factor * std::max(initial_, 1e-8)) {
    throw NumericalError("simulation blew up at t = " + std::to_string(t));
  }
  if (opts_.on_sample) opts_.on_sample(t, dev);
}

}  // namespace detail

double SimTrace::max_relative_mass_drift() const {
  double worst = 0.0;
  for (double m : mass) worst = std::max(worst, std::abs(m - mass.front()) / std::max(std::abs(mass.front()), 1e-300));
  return worst;
}

PhaseField transport_step(const PhaseField& f, double dt) {
  if (!(dt >= 0.0)) throw ValidationError("transport_step: dt must be non-negative");
  ModeSet modes = f.modes();
  const auto& grid = f.grid();
  const std::size_t m = modes.x_nodes;
  for (std::size_t k = 0; k < modes.modes.size(); ++k) {
    auto& mk = modes.modes[k];
    if (2 * k == m) {
      std::fill(mk.begin(), mk.end(), cplx(0.0));
      continue;
    }
    if (k == 0) continue;
    for (std::size_t j = 0; j < mk.size(); ++j) mk[j] *= std::polar(1.0, -static_cast<double>(k) * grid.node(j) * dt);
  }
  return PhaseField::from_modes(modes, f.grid_ptr());
}

PhaseField collision_step_lfp(const PhaseField& f, const AlphaParams& p, double dt) {
  if (!(dt >= 0.0)) throw ValidationError("collision_step_lfp: dt must be non-negative");
  const double a = AlphaParams::make(p.alpha, p.dim).alpha;
  ModeSet modes = f.modes();
  for (std::size_t k = 0; k < modes.modes.size(); ++k) {
    if (modes.empty_mode(k)) continue;
    modes.modes[k] = collide_profile(f.grid(), modes.modes[k], a, dt);
  }
  return PhaseField::from_modes(modes, f.grid_ptr());
}

PhaseField strang_step(const PhaseField& f, const AlphaParams& p, double dt) {
  if (!(dt > 0.0)) throw ValidationError("strang_step: dt must be positive");
  return transport_step(collision_step_lfp(transport_step(f, 0.5 * dt), p, dt), 0.5 * dt);
}

VelocityField exact_homogeneous(const VelocityField& g0, const AlphaParams& p, double t) {
  if (!(t >= 0.0)) throw ValidationError("exact_homogeneous: t must be non-negative");
  const double a = AlphaParams::make(p.alpha, p.dim).alpha;
  std::vector<cplx> c(g0.values().begin(), g0.values().end());
  const auto out = collide_profile(g0.grid(), c, a, t);
  std::vector<double> r(out.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = out[i].real();
  return VelocityField(g0.grid_ptr(), std::move(r));
}

double running_rate(const std::vector<double>& t, const std::vector<double>& norm, double t0) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || !(norm[i] > 0.0)) continue;
    x.push_back(t[i]);
    y.push_back(std::log(norm[i]));
  }
  if (x.size() < 3) return kNaN;
  return -numerics::fit_line(x, y).slope;
}

SimResult simulate(const PhaseField& f0, const AlphaParams& p, const HypoCoeffs& coeffs, const WeightedL2& space,
                   const SimOptions& opts) {
  const double a = AlphaParams::make(p.alpha, p.dim).alpha;
  if (!coeffs.valid()) throw ValidationError("simulate: coefficients violate c^2 < ab");
  if (!(opts.dt > 0.0) || !(opts.t_end >= 0.0)) throw ValidationError("simulate: need dt > 0 and t_end >= 0");
  if (opts.sample_every == 0) throw ValidationError("simulate: sample_every must be >= 1");
  if (!(f0.grid() == space.grid())) throw ValidationError("simulate: initial field and weight live on different grids");
  if (!f0.is_finite()) throw ValidationError("simulate: initial field is not finite");

  const auto& grid = f0.grid();
  const std::size_t m = f0.x_nodes();
  const auto steps = static_cast<std::size_t>(std::llround(opts.t_end / opts.dt));

  std::vector<std::size_t> active;
  std::vector<ModeState> states;
  for (std::size_t k = 0; k < f0.modes().modes.size() && 2 * k < m; ++k) {
    if (f0.modes().empty_mode(k)) continue;
    active.push_back(k);
    states.emplace_back(grid, k, f0.modes().modes[k], a);
  }

  auto current_modes = [&]() {
    ModeSet ms;
    ms.x_nodes = m;
    ms.modes.assign(m / 2 + 1, std::vector<cplx>(grid.size()));
    for (std::size_t i = 0; i < active.size(); ++i) ms.modes[active[i]] = spectral::inverse(grid, states[i].spectrum(grid));
    return ms;
  };

  SimResult result{SimTrace{}, f0};
  detail::TraceRecorder rec(space, coeffs, opts, result.trace);
  rec.record(0.0, f0.modes());
  if (opts.snapshot_every > 0 && opts.on_snapshot) opts.on_snapshot(0.0, f0);
  for (std::size_t step = 1; step <= steps; ++step) {
    for (auto& s : states) {
      s.transport(0.5 * opts.dt);
      s.collide(opts.dt);
      s.transport(0.5 * opts.dt);
    }
    const double t = static_cast<double>(step) * opts.dt;
    const bool sample = step % opts.sample_every == 0 || step == steps;
    const bool snap = opts.snapshot_every > 0 && opts.on_snapshot && step % opts.snapshot_every == 0;
    if (!sample && !snap) continue;
    const auto ms = current_modes();
    if (sample) rec.record(t, ms);
    if (snap) opts.on_snapshot(t, PhaseField::from_modes(ms, f0.grid_ptr()));
  }
  result.final_state = steps == 0 ? f0 : PhaseField::from_modes(current_modes(), f0.grid_ptr());
  return result;
}

}  // namespace levykin
