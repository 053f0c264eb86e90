#pragma once

#include <functional>
#include <vector>

#include "levykin/coeffs.hpp"
#include "levykin/phase_field.hpp"

namespace levykin {

/// Time series recorded by the simulators. Norms are of the deviation
/// f - <f> mu from the global equilibrium; `triple_norm` is |||.|||, not
/// its square.
struct SimTrace {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> triple_norm;
  std::vector<double> h1_norm;
  std::vector<double> l2_norm;
  std::vector<double> dissipation_estimate;   // NaN unless requested
  std::vector<double> fitted_lambda_running;  // NaN until enough samples

  [[nodiscard]] std::size_t size() const { return times.size(); }
  [[nodiscard]] double max_relative_mass_drift() const;
};

/// Free transport over dt: mode k at velocity v picks up e^{-i k v dt}.
/// The Nyquist x-mode is dropped (it cannot stay real under transport).
PhaseField transport_step(const PhaseField& f, double dt);

/// Exact Levy-Fokker-Planck flow in v over dt, per x-mode, on the Fourier
/// side: ghat(dt, xi) = ghat0(xi e^{-dt}) exp(-(|xi|^a/a)(1 - e^{-a dt})).
/// ghat0 / muhat is interpolated at the contracted frequencies by local
/// 8-point Lagrange; the xi = 0 value is kept exactly.
PhaseField collision_step_lfp(const PhaseField& f, const AlphaParams& p, double dt);

/// T(dt/2) C(dt) T(dt/2) on the grid.
PhaseField strang_step(const PhaseField& f, const AlphaParams& p, double dt);

/// Closed-form solution of the homogeneous equation d_t g = L_alpha g.
VelocityField exact_homogeneous(const VelocityField& g0, const AlphaParams& p, double t);

struct SimOptions {
  double dt = 0.05;
  double t_end = 10.0;
  std::size_t sample_every = 1;  // steps between trace samples
  double fit_from = 1.0;         // start of the running decay fit
  double blowup_factor = 1e6;    // abort when |||f||| exceeds this x initial
  /// Called at every trace sample with the time and the deviation modes.
  std::function<void(double, const ModeSet&)> on_sample;
  /// Called every `snapshot_every` steps (0 = never) with the full field.
  std::size_t snapshot_every = 0;
  std::function<void(double, const PhaseField&)> on_snapshot;
  /// Evaluates D(f, f) at each sample when set.
  std::function<double(const ModeSet&)> dissipation;
};

struct SimResult {
  SimTrace trace;
  PhaseField final_state;
};

/// Strang splitting of transport and the exact collision flow.
///
/// Both sub-flows act on a mode's spectrum by an affine change of variable
/// (a shift for transport, a dilation plus a multiplier for the collision),
/// so the composition after any number of steps has the closed form
///   G(xi) = G0(p xi + s) exp(-sum_i g_i |p_i xi + s_i|^alpha)
/// and is evaluated without per-step interpolation. `space` supplies the
/// weight (normally the periodized equilibrium) and the derivative.
SimResult simulate(const PhaseField& f0, const AlphaParams& p, const HypoCoeffs& coeffs, const WeightedL2& space,
                   const SimOptions& opts);

/// Running least-squares rate of log(norm) against t over samples t >= t0.
double running_rate(const std::vector<double>& t, const std::vector<double>& norm, double t0);

}  // namespace levykin
