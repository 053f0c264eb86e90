#pragma once

#include <complex>
#include <span>
#include <vector>

#include "levykin/coeffs.hpp"
#include "levykin/forms.hpp"
#include "levykin/grid.hpp"

namespace levykin {

using cplx = std::complex<double>;

/// Velocity profiles of the x-Fourier modes k = 0..m/2 of a real field on
/// the 2 pi torus: f(x, v) = sum_k fhat_k(v) e^{i k x} (negative k by
/// conjugation).
struct ModeSet {
  std::size_t x_nodes = 0;
  std::vector<std::vector<cplx>> modes;

  /// Multiplicity of mode k in sums over all integer modes (1 or 2).
  [[nodiscard]] double multiplicity(std::size_t k) const;
  [[nodiscard]] bool empty_mode(std::size_t k) const;
};

/// f(x, v) on m uniform torus nodes x_i = 2 pi i / m times a velocity grid,
/// stored x-major, with its x-Fourier modes cached at construction.
class PhaseField {
 public:
  PhaseField(std::size_t x_nodes, GridPtr grid);
  PhaseField(std::size_t x_nodes, GridPtr grid, std::vector<double> values);
  static PhaseField from_modes(const ModeSet& modes, GridPtr grid);
  /// rho(x_i) g(v_j).
  static PhaseField separable(std::size_t x_nodes, const std::vector<double>& rho, const VelocityField& g);

  [[nodiscard]] std::size_t x_nodes() const { return m_; }
  [[nodiscard]] double x(std::size_t i) const;
  [[nodiscard]] const VelocityGrid& grid() const { return *grid_; }
  [[nodiscard]] const GridPtr& grid_ptr() const { return grid_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double at(std::size_t ix, std::size_t iv) const { return values_[ix * grid_->size() + iv]; }
  [[nodiscard]] std::span<const double> row(std::size_t ix) const;
  [[nodiscard]] const ModeSet& modes() const { return modes_; }

  /// int int f dx dv.
  [[nodiscard]] double mass() const { return mass_; }
  [[nodiscard]] bool is_finite() const;

 private:
  void build_modes();

  std::size_t m_;
  GridPtr grid_;
  std::vector<double> values_;
  ModeSet modes_;
  double mass_ = 0.0;
};

ModeSet modes_from_values(std::size_t x_nodes, std::size_t v_nodes, std::span<const double> values);
std::vector<double> values_from_modes(const ModeSet& modes, std::size_t v_nodes);

/// Removes the global equilibrium <f> mu from mode 0 (mass-preserving
/// projection of the weighted space).
ModeSet equilibrium_deviation(const ModeSet& f, const WeightedL2& space);

/// Squared L^2_{x,v}(mu^{-1}) pieces of a field.
struct PhaseNorms {
  double l2 = 0.0;     // ||f||^2
  double dx = 0.0;     // ||d_x f||^2
  double dv = 0.0;     // ||d_v f||^2
  double cross = 0.0;  // <d_x f, d_v f>

  [[nodiscard]] double h1() const { return l2 + dx + dv; }
  [[nodiscard]] double triple(const HypoCoeffs& c) const { return l2 + c.a * dx + c.b * dv + 2.0 * c.c * cross; }
};
PhaseNorms phase_norms(const ModeSet& f, const WeightedL2& space);

/// |||f|||^2 of the field itself (no equilibrium removed).
double triple_norm(const PhaseField& f, const HypoCoeffs& coeffs, const WeightedL2& space);

/// Per-x projection (rho(x) mu) and its mode form.
PhaseField project_equilibrium(const PhaseField& f, const WeightedL2& space);

}  // namespace levykin
