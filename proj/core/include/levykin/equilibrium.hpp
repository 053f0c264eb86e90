#pragma once

#include <utility>
#include <vector>

#include "levykin/grid.hpp"

namespace levykin {

/// Fourier profile of the equilibrium, exp(-|xi|^alpha / alpha).
double equilibrium_fourier(double xi, double alpha);

/// Pointwise evaluation of mu_alpha and its derivative by quadrature of the
/// inverse Fourier integral (1/pi) int_0^inf cos(v xi) exp(-xi^a/a) dxi.
///
/// Composite 20-point Gauss-Legendre on panels that are geometrically graded
/// towards xi = 0 (where the profile has a |xi|^alpha cusp) and uniform
/// beyond, up to the point where the profile drops below 1e-18.
class EquilibriumEvaluator {
 public:
  explicit EquilibriumEvaluator(double alpha);

  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] double density(double v) const;
  [[nodiscard]] double gradient(double v) const;

  /// Vectorized evaluation on a uniform lattice v_i = v0 + i h.
  [[nodiscard]] std::vector<double> density_lattice(double v0, double h, std::size_t count) const;
  [[nodiscard]] std::vector<double> gradient_lattice(double v0, double h, std::size_t count) const;

 private:
  std::vector<double> lattice_sum(double v0, double h, std::size_t count, bool derivative) const;

  double alpha_;
  std::vector<double> nodes_;    // xi_q
  std::vector<double> weights_;  // w_q * profile(xi_q) / pi
};

/// Large-|v| asymptotic series of mu_alpha (terms >= 1).
double equilibrium_tail_series(double v, double alpha, int terms = 8);

/// mu_alpha on the grid. Throws ValidationError when the grid does not
/// resolve the Fourier profile (exp(-xi_max^a/a) >= floor) or alpha is
/// outside (0, 2).
VelocityField equilibrium_density(double alpha, const GridPtr& grid, double floor = 1e-12);

/// d mu_alpha / dv on the grid, by the same quadrature.
VelocityField equilibrium_gradient(double alpha, const GridPtr& grid, double floor = 1e-12);

/// Inverse DFT of the profile sampled at the dual modes: the 2V-periodic
/// image sum of mu_alpha. It is the exact discrete equilibrium of the
/// spectral solvers and has discrete mass exactly 1.
VelocityField periodized_equilibrium(double alpha, const GridPtr& grid, double floor = 1e-12);

/// Throws unless exp(-xi_max^alpha / alpha) < floor.
void require_resolved(double alpha, const VelocityGrid& grid, double floor);

/// Positive exponent p of a least-squares fit mu ~ |v|^{-p} over the nodes
/// with window.first <= v <= window.second. Default window [V/4, V/2].
double tail_exponent_fit(const VelocityField& mu, std::pair<double, double> window);
double tail_exponent_fit(const VelocityField& mu);

struct Envelope {
  double min = 0.0;
  double max = 0.0;
  [[nodiscard]] double ratio() const { return max / min; }
};

struct TailBoundReport {
  Envelope density;   // (|v|^{d+a} + 1) mu
  Envelope gradient;  // (|v|^{2+d+a} + 1) |mu'| / |v|, over |v| >= gradient_cutoff
  double gradient_cutoff = 1.0;
};

TailBoundReport tail_bound_check(const VelocityField& mu, const VelocityField& grad_mu, double alpha, int dim = 1,
                                 double gradient_cutoff = 1.0);

}  // namespace levykin
