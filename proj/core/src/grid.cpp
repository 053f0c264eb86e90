#include "levykin/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "levykin/errors.hpp"

namespace levykin {

AlphaParams AlphaParams::make(double alpha, int dim) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw ValidationError("alpha must lie in the open interval (0, 2), got " + std::to_string(alpha));
  }
  if (dim < 1) throw ValidationError("dim must be >= 1");
  return AlphaParams{alpha, dim};
}

VelocityGrid::VelocityGrid(double extent, std::size_t nodes) : extent_(extent), n_(nodes) {
  if (!(extent > 0.0) || !std::isfinite(extent)) throw ValidationError("velocity extent must be positive");
  if (nodes < 16 || nodes % 2 != 0) throw ValidationError("velocity node count must be even and >= 16");
  h_ = 2.0 * extent_ / static_cast<double>(n_);
  nodes_.resize(n_);
  dual_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    nodes_[i] = node(i);
    dual_[i] = dual_mode(i);
  }
}

VelocityGrid VelocityGrid::for_alpha(double alpha, double floor) {
  constexpr double kExtent = 64.0;
  std::size_t n = 2048;
  for (; n <= (std::size_t{1} << 20); n *= 2) {
    const double xi_max = std::numbers::pi * static_cast<double>(n) / (2.0 * kExtent);
    if (std::exp(-std::pow(xi_max, alpha) / alpha) < floor) return VelocityGrid(kExtent, n);
  }
  throw ValidationError("no default grid resolves alpha = " + std::to_string(alpha));
}

double VelocityGrid::dual_spacing() const { return std::numbers::pi / extent_; }
double VelocityGrid::max_frequency() const { return std::numbers::pi / h_; }

double VelocityGrid::dual_mode(std::size_t j) const {
  const auto half = n_ / 2;
  const double idx = j < half ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n_);
  return idx * dual_spacing();
}

VelocityField::VelocityField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ValidationError("VelocityField: null grid");
  if (values_.size() != grid_->size()) throw ValidationError("VelocityField: value count does not match grid");
}

VelocityField::VelocityField(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw ValidationError("VelocityField: null grid");
  values_.assign(grid_->size(), 0.0);
}

double VelocityField::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_->weight();
}

bool VelocityField::is_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool VelocityField::is_positive() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v > 0.0; });
}

VelocityField& VelocityField::operator+=(const VelocityField& other) {
  require_same_grid(*this, other, "operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

VelocityField& VelocityField::operator-=(const VelocityField& other) {
  require_same_grid(*this, other, "operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

VelocityField& VelocityField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }
VelocityField operator-(VelocityField a, const VelocityField& b) { return a -= b; }
VelocityField operator*(double s, VelocityField a) { return a *= s; }

void require_same_grid(const VelocityField& a, const VelocityField& b, const char* where) {
  if (!(a.grid() == b.grid())) throw ValidationError(std::string(where) + ": velocity grids differ");
}

}  // namespace levykin
