#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace levykin {

/// Stability index and dimension of the Levy-Fokker-Planck problem.
struct AlphaParams {
  double alpha = 1.0;
  int dim = 1;

  /// Validating constructor: 0 < alpha < 2 and dim >= 1.
  static AlphaParams make(double alpha, int dim = 1);
};

/// Uniform truncated velocity lattice [-V, V) with n nodes and its DFT dual.
///
/// Node i sits at v_i = -V + i h (h = 2V/n), so node n/2 is v = 0. Dual mode
/// j (FFT ordering) is xi_j = j * pi/V for j < n/2 and (j - n) * pi/V
/// otherwise. The forward transform convention throughout the library is
/// ghat(xi) = int e^{-i v xi} g(v) dv, inverse with the 1/(2 pi) factor.
class VelocityGrid {
 public:
  VelocityGrid(double extent, std::size_t nodes);

  /// Default lattice for a given alpha: V = 64, and the smallest power-of-two
  /// n >= 2048 for which exp(-xi_max^alpha / alpha) is below `floor`.
  static VelocityGrid for_alpha(double alpha, double floor = 1e-12);

  [[nodiscard]] double extent() const { return extent_; }
  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] double spacing() const { return h_; }
  [[nodiscard]] double dual_spacing() const;
  [[nodiscard]] double max_frequency() const;  // pi / h

  [[nodiscard]] double node(std::size_t i) const { return -extent_ + static_cast<double>(i) * h_; }
  [[nodiscard]] double dual_mode(std::size_t j) const;
  [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<double>& dual_modes() const { return dual_; }

  /// Trapezoidal (= rectangle, the lattice is uniform) quadrature weight.
  [[nodiscard]] double weight() const { return h_; }

  bool operator==(const VelocityGrid& other) const { return extent_ == other.extent_ && n_ == other.n_; }

 private:
  double extent_;
  std::size_t n_;
  double h_;
  std::vector<double> nodes_;
  std::vector<double> dual_;
};

using GridPtr = std::shared_ptr<const VelocityGrid>;

/// Real function sampled on a VelocityGrid.
class VelocityField {
 public:
  VelocityField() = default;
  VelocityField(GridPtr grid, std::vector<double> values);
  explicit VelocityField(GridPtr grid);  // zeros

  [[nodiscard]] const VelocityGrid& grid() const { return *grid_; }
  [[nodiscard]] const GridPtr& grid_ptr() const { return grid_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  /// Rectangle-rule integral over the lattice.
  [[nodiscard]] double integral() const;
  [[nodiscard]] bool is_finite() const;
  [[nodiscard]] bool is_positive() const;

  VelocityField& operator+=(const VelocityField& other);
  VelocityField& operator-=(const VelocityField& other);
  VelocityField& operator*=(double s);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

VelocityField operator+(VelocityField a, const VelocityField& b);
VelocityField operator-(VelocityField a, const VelocityField& b);
VelocityField operator*(double s, VelocityField a);

/// Throws ValidationError unless both fields live on equal grids.
void require_same_grid(const VelocityField& a, const VelocityField& b, const char* where);

/// Samples fn on the grid.
template <class Fn>
VelocityField sample(const GridPtr& grid, Fn&& fn) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid->node(i));
  return VelocityField(grid, std::move(v));
}

}  // namespace levykin
