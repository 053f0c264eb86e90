#pragma once

#include <complex>
#include <span>
#include <vector>

#include "levykin/grid.hpp"

namespace levykin {

/// How velocity derivatives are taken. Periodic (spectral) derivatives are
/// exact in the solver's periodized world; finite differences suit data on
/// the truncated line.
enum class Derivative { spectral, finite_difference };

struct WeightedNorms {
  double l2_weighted = 0.0;   // ||g||_{L^2(mu^{-1})}
  double h1_weighted = 0.0;   // sqrt(l2^2 + grad^2)
  double grad_weighted = 0.0; // ||dg/dv||_{L^2(mu^{-1})}
  double h_alpha_half = 0.0;  // ||g mu^{-1/2}||_{H^{alpha/2}} (inhomogeneous)
};

struct HAlphaHalf {
  double symbol = 0.0;             // (1/2pi) int |xi|^alpha |uhat|^2
  double double_integral = 0.0;    // normalized double-integral quadrature
  double normalization = 0.0;      // factor applied to the raw double sum
  double relative_deviation = 0.0;
};

/// L^2(mu^{-1}) geometry on a velocity grid: inner products, the
/// projection onto span(mu) and velocity derivatives.
class WeightedL2 {
 public:
  explicit WeightedL2(VelocityField mu, Derivative derivative = Derivative::finite_difference, int fd_accuracy = 8);

  [[nodiscard]] const VelocityField& mu() const { return mu_; }
  [[nodiscard]] const VelocityGrid& grid() const { return mu_.grid(); }
  [[nodiscard]] Derivative derivative_method() const { return derivative_; }
  [[nodiscard]] int fd_accuracy() const { return fd_accuracy_; }

  /// <f, g>_{L^2(mu^{-1})}.
  [[nodiscard]] double inner(std::span<const double> f, std::span<const double> g) const;
  [[nodiscard]] double norm2(std::span<const double> f) const { return inner(f, f); }
  [[nodiscard]] double norm2_complex(std::span<const std::complex<double>> f) const;
  /// Re <f, g> for complex profiles.
  [[nodiscard]] double inner_complex(std::span<const std::complex<double>> f,
                                     std::span<const std::complex<double>> g) const;

  [[nodiscard]] std::vector<double> derivative(std::span<const double> f) const;
  [[nodiscard]] std::vector<std::complex<double>> derivative(std::span<const std::complex<double>> f) const;
  [[nodiscard]] std::vector<double> second_derivative(std::span<const double> f) const;

  /// (sum h f) mu / (sum h mu): exactly idempotent on the lattice.
  [[nodiscard]] VelocityField project(const VelocityField& f) const;
  [[nodiscard]] double mass(std::span<const double> f) const;
  [[nodiscard]] double mu_mass() const { return mu_mass_; }

 private:
  VelocityField mu_;
  Derivative derivative_;
  int fd_accuracy_;
  double mu_mass_;
};

/// Precomputed tables for the nonlocal forms at one (mu, alpha).
///
/// The double integrals use the lattice pairing of the fractional-Laplacian
/// quadrature: a double sum over j != i, the exterior lattice in closed form
/// (F = f/mu extended by its edge values) and the leading singular-cell
/// correction. With only the leading correction the discrete S is a Gram
/// form, hence exactly symmetric and positive semi-definite.
class FormContext : public WeightedL2 {
 public:
  FormContext(VelocityField mu, double alpha, Derivative derivative = Derivative::finite_difference,
              int fd_accuracy = 8, double weight_cap = 1e8);

  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] double kernel_constant() const { return C_; }

  [[nodiscard]] double s_form(std::span<const double> f, std::span<const double> g) const;
  [[nodiscard]] double a_form(std::span<const double> f, std::span<const double> g) const;
  [[nodiscard]] double s_form(const VelocityField& f, const VelocityField& g) const;
  [[nodiscard]] double a_form(const VelocityField& f, const VelocityField& g) const;
  /// S(Re f, Re f) + S(Im f, Im f).
  [[nodiscard]] double s_form_complex(std::span<const std::complex<double>> f) const;

  /// Both sides of ||u||^2_{Hdot^{alpha/2}} for an unweighted profile u.
  [[nodiscard]] HAlphaHalf h_alpha_half(std::span<const double> u) const;

  [[nodiscard]] WeightedNorms weighted_norms(const VelocityField& f) const;

 private:
  [[nodiscard]] std::vector<double> ratio(std::span<const double> f) const;  // f / mu, validated

  double alpha_;
  double C_;
  double weight_cap_;
  std::vector<double> kern_;      // (m h)^{-1-alpha}
  std::vector<double> ext_left_;  // h^{-alpha} zeta_H(1+alpha, i+1)
  std::vector<double> ext_right_; // h^{-alpha} zeta_H(1+alpha, n-i)
  double corr_;                   // -2 zeta(alpha-1) h^{2-alpha}
  double h_norm_;                 // double-integral normalization
};

/// Free-function forms of the above, building a context on the fly.
VelocityField project_equilibrium(const VelocityField& f, const VelocityField& mu);
double s_form(const VelocityField& f, const VelocityField& g, const VelocityField& mu, const AlphaParams& p);
double a_form(const VelocityField& f, const VelocityField& g, const VelocityField& mu, const AlphaParams& p);

struct DecompositionResidual {
  double lhs = 0.0;       // -<L f, g>_{mu^{-1}}
  double s = 0.0;
  double a = 0.0;
  /// -[v mu F G] at v = -V and V: the flux through the edges of the velocity
  /// box, O(V^{-alpha}); zero on the whole line.
  double boundary_flux = 0.0;
  double absolute = 0.0;      // |lhs - s - a - boundary_flux|
  double relative = 0.0;      // absolute / max(|lhs|, sqrt(S(f,f) S(g,g)))
  double absolute_raw = 0.0;  // |lhs - s - a|
  double relative_raw = 0.0;
};

/// Compares -<L f, g>_{mu^{-1}} (quadrature operator, equilibrium tail
/// extension of f) with S(f,g) + A(f,g) plus the box boundary flux.
/// `ctx.mu()` must be the whole-line equilibrium for ctx.alpha().
DecompositionResidual decomposition_residual(const VelocityField& f, const VelocityField& g, const FormContext& ctx);

/// (1/2pi) sum |xi|^alpha |uhat|^2 dxi: the homogeneous H^{alpha/2}
/// seminorm squared, symbol side, with the leading correction for the
/// |xi|^alpha cusp at xi = 0.
double h_alpha_half_symbol(const VelocityGrid& grid, double alpha, std::span<const double> u);

/// sum_i h [sum_{j!=i} h (u_i - u_j)^2 K_ij + exterior + singular cell] with
/// u extended by zero: the double integral without its constant.
double h_alpha_half_raw(const VelocityGrid& grid, double alpha, std::span<const double> u);

/// Symbol / raw on the unit Gaussian exp(-v^2/2): the factor that puts the
/// double-integral side on the symbol side's scale.
double h_alpha_half_normalization(const VelocityGrid& grid, double alpha);

/// ||g||^2_{Hdot^{alpha/2}} of g itself (no weight), both sides.
HAlphaHalf h_alpha_half_norm(const VelocityField& g, const AlphaParams& p);

}  // namespace levykin
