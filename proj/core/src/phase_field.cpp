#include "levykin/phase_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levykin/errors.hpp"
#include "levykin/spectral.hpp"

namespace levykin {

bool HypoCoeffs::valid() const {
  return a > 0.0 && b > 0.0 && c > 0.0 && eps >= 0.0 && std::isfinite(a) && std::isfinite(b) && c * c < a * b;
}

HypoCoeffs HypoCoeffs::make(double a, double b, double c, double eps) {
  HypoCoeffs h{a, b, c, eps};
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw ValidationError("coefficients a, b, c must be positive");
  if (!(eps >= 0.0)) throw ValidationError("eps must be non-negative");
  if (!(c * c < a * b)) throw ValidationError("coefficients violate c^2 < ab (triple norm not equivalent to H^1)");
  return h;
}

std::pair<double, double> HypoCoeffs::equivalence_bounds() const {
  const double tr = a + b;
  const double disc = std::sqrt((a - b) * (a - b) + 4.0 * c * c);
  const double lo = 0.5 * (tr - disc), hi = 0.5 * (tr + disc);
  return {std::min(1.0, lo), std::max(1.0, hi)};
}

double ModeSet::multiplicity(std::size_t k) const { return (k == 0 || 2 * k == x_nodes) ? 1.0 : 2.0; }

bool ModeSet::empty_mode(std::size_t k) const {
  return std::all_of(modes[k].begin(), modes[k].end(), [](cplx z) { return z == cplx(0.0); });
}

ModeSet modes_from_values(std::size_t m, std::size_t n, std::span<const double> values) {
  if (values.size() != m * n) throw ValidationError("phase field: value count does not match m x n");
  ModeSet out;
  out.x_nodes = m;
  out.modes.assign(m / 2 + 1, std::vector<cplx>(n));
  std::vector<cplx> col(m), hat(m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) col[i] = values[i * n + j];
    spectral::dft(col, hat, -1);
    for (std::size_t k = 0; k <= m / 2; ++k) out.modes[k][j] = hat[k] / static_cast<double>(m);
  }
  return out;
}

std::vector<double> values_from_modes(const ModeSet& modes, std::size_t n) {
  const std::size_t m = modes.x_nodes;
  if (modes.modes.size() != m / 2 + 1) throw ValidationError("mode set does not match its x node count");
  std::vector<double> values(m * n);
  std::vector<cplx> hat(m), col(m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k <= m / 2; ++k) hat[k] = modes.modes[k][j];
    hat[m / 2] = hat[m / 2].real();
    for (std::size_t k = 1; k < m / 2; ++k) hat[m - k] = std::conj(hat[k]);
    spectral::dft(hat, col, +1);
    for (std::size_t i = 0; i < m; ++i) values[i * n + j] = col[i].real();
  }
  return values;
}

PhaseField::PhaseField(std::size_t x_nodes, GridPtr grid) : PhaseField(x_nodes, grid, std::vector<double>(x_nodes * (grid ? grid->size() : 0))) {}

PhaseField::PhaseField(std::size_t x_nodes, GridPtr grid, std::vector<double> values)
    : m_(x_nodes), grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ValidationError("PhaseField: null grid");
  if (m_ < 2 || m_ % 2 != 0) throw ValidationError("torus node count must be even and >= 2");
  if (values_.size() != m_ * grid_->size()) throw ValidationError("PhaseField: value count does not match m x n");
  build_modes();
}

PhaseField PhaseField::from_modes(const ModeSet& modes, GridPtr grid) {
  auto values = values_from_modes(modes, grid->size());
  return PhaseField(modes.x_nodes, std::move(grid), std::move(values));
}

PhaseField PhaseField::separable(std::size_t x_nodes, const std::vector<double>& rho, const VelocityField& g) {
  if (rho.size() != x_nodes) throw ValidationError("PhaseField::separable: rho size mismatch");
  const std::size_t n = g.size();
  std::vector<double> values(x_nodes * n);
  for (std::size_t i = 0; i < x_nodes; ++i)
    for (std::size_t j = 0; j < n; ++j) values[i * n + j] = rho[i] * g[j];
  return PhaseField(x_nodes, g.grid_ptr(), std::move(values));
}

void PhaseField::build_modes() {
  modes_ = modes_from_values(m_, grid_->size(), values_);
  double s = 0.0;
  for (const auto& z : modes_.modes[0]) s += z.real();
  mass_ = 2.0 * std::numbers::pi * s * grid_->spacing();
}

double PhaseField::x(std::size_t i) const { return 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m_); }

std::span<const double> PhaseField::row(std::size_t ix) const {
  return std::span<const double>(values_).subspan(ix * grid_->size(), grid_->size());
}

bool PhaseField::is_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ModeSet equilibrium_deviation(const ModeSet& f, const WeightedL2& space) {
  ModeSet d = f;
  auto& m0 = d.modes[0];
  double s = 0.0;
  for (const auto& z : m0) s += z.real();
  const double scale = s * space.grid().spacing() / space.mu_mass();
  for (std::size_t j = 0; j < m0.size(); ++j) m0[j] -= scale * space.mu()[j];
  return d;
}

PhaseNorms phase_norms(const ModeSet& f, const WeightedL2& space) {
  PhaseNorms r;
  for (std::size_t k = 0; k < f.modes.size(); ++k) {
    if (f.empty_mode(k)) continue;
    const double w = 2.0 * std::numbers::pi * f.multiplicity(k);
    const auto& fk = f.modes[k];
    const auto dv = space.derivative(std::span<const cplx>(fk));
    const double kk = (2 * k == f.x_nodes) ? 0.0 : static_cast<double>(k);
    const double l2 = space.norm2_complex(fk);
    r.l2 += w * l2;
    r.dx += w * kk * kk * l2;
    r.dv += w * space.norm2_complex(dv);
    // Re <i k fhat_k, d_v fhat_k>
    std::vector<cplx> ikf(fk.size());
    for (std::size_t j = 0; j < fk.size(); ++j) ikf[j] = cplx(0.0, kk) * fk[j];
    r.cross += w * space.inner_complex(ikf, dv);
  }
  return r;
}

double triple_norm(const PhaseField& f, const HypoCoeffs& coeffs, const WeightedL2& space) {
  if (!coeffs.valid()) throw ValidationError("triple_norm: invalid coefficients");
  return phase_norms(f.modes(), space).triple(coeffs);
}

PhaseField project_equilibrium(const PhaseField& f, const WeightedL2& space) {
  const std::size_t m = f.x_nodes(), n = f.grid().size();
  std::vector<double> out(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    const double scale = space.mass(f.row(i)) / space.mu_mass();
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = scale * space.mu()[j];
  }
  return PhaseField(m, f.grid_ptr(), std::move(out));
}

}  // namespace levykin
