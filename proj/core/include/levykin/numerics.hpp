#pragma once

// Small numerical building blocks shared by the modules: special functions,
// finite-difference stencils, local polynomial interpolation, regression and
// the thread-count knob.

#include <cstddef>
#include <span>
#include <vector>

namespace levykin::numerics {

/// Riemann zeta for any real s != 1 (including negative arguments).
double riemann_zeta(double s);

/// Hurwitz zeta sum_{k>=0} (k + a)^{-s} for s > 1, a > 0.
double hurwitz_zeta(double s, double a);

/// Fornberg weights for the derivative of order `order` at x0 using the
/// given stencil abscissae.
std::vector<double> fd_weights(int order, std::span<const double> stencil, double x0);

/// Derivative of a uniformly sampled, non-periodic signal by high-order
/// finite differences. Interior nodes use a centred stencil; the first and
/// last nodes fall back to shifted (one-sided) stencils of the same width.
class FiniteDifference {
 public:
  /// `accuracy` is the formal order for the first derivative (even, >= 2).
  FiniteDifference(int order, int accuracy, double spacing, std::size_t size);

  [[nodiscard]] std::vector<double> apply(std::span<const double> values) const;
  [[nodiscard]] int order() const { return order_; }

 private:
  int order_;
  std::size_t size_;
  std::size_t width_;
  std::vector<std::vector<double>> weights_;  // one row per distinct offset class
  std::vector<std::ptrdiff_t> first_;         // stencil start for each node
  std::vector<std::size_t> row_;              // weight row for each node
};

/// Evaluates the degree-(width-1) Lagrange interpolant through `width`
/// consecutive nodes of a uniform grid starting at x0 with spacing dx.
struct LagrangeStencil {
  std::size_t start = 0;
  std::vector<double> weights;
};
LagrangeStencil lagrange_stencil(double x, double x0, double dx, std::size_t size, std::size_t width);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};
/// Ordinary least squares y = slope * x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Number of worker threads used by the parallel maps (OpenMP). Results do
/// not depend on this value: every reduction runs in a fixed order per
/// output element.
void set_thread_count(int threads);
int thread_count();

}  // namespace levykin::numerics
