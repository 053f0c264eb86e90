#pragma once

#include "levykin/coeffs.hpp"
#include "levykin/phase_field.hpp"
#include "levykin/solver_lfp.hpp"

namespace levykin {

/// A validated BGK equilibrium: M > 0 with unit discrete mass and a bounded
/// logarithmic gradient.
struct BgkEquilibrium {
  VelocityField M;
  double log_grad_bound = 0.0;  // sup |d_v ln M| over |v| <= V/2
  double C_M = 0.0;             // log_grad_bound^2 * torus_poincare^2
};

struct BgkHypothesisOptions {
  double mass_tolerance = 0.05;  // allowed |int M - 1| before renormalizing
  double log_grad_cap = 1e3;
  /// Reject when the sup over V/4 < |v| <= V/2 exceeds this multiple of the
  /// sup over |v| <= V/4 (a log-gradient that keeps growing with v).
  double growth_ratio = 1.5;
  std::size_t fd_accuracy = 8;
  double torus_poincare = 1.0;
};

BgkEquilibrium check_hypotheses(const VelocityField& M, const BgkHypothesisOptions& opts = {});

/// Per x: (int f dv) M.
PhaseField bgk_project(const PhaseField& f, const BgkEquilibrium& eq);

/// Exact relaxation f(dt) = e^{-dt} f + (1 - e^{-dt}) Pi_M f.
PhaseField bgk_collision_step(const PhaseField& f, const BgkEquilibrium& eq, double dt);

/// Coefficients b = 1, c > 2 b C_M, a > 4c^2/b + b + C_M c / 2, each strict
/// inequality taken with a relative margin.
HypoCoeffs bgk_recipe(const BgkEquilibrium& eq, double margin = 1.1, double b = 1.0);

/// Strang splitting of exact transport and exact relaxation, with norms
/// weighted by M^{-1}.
SimResult simulate_bgk(const PhaseField& f0, const BgkEquilibrium& eq, const HypoCoeffs& coeffs,
                       const SimOptions& opts);

/// Weighted space used for BGK norms (finite-difference derivatives: M is
/// not periodic on the velocity box).
WeightedL2 bgk_space(const BgkEquilibrium& eq, std::size_t fd_accuracy = 8);

}  // namespace levykin
