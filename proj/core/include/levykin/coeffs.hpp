#pragma once

#include <utility>

namespace levykin {

/// Weights (a, b, c) of the hypocoercive triple norm
///   |||f|||^2 = ||f||^2 + a ||d_x f||^2 + b ||d_v f||^2 + 2c <d_x f, d_v f>
/// and the interpolation parameter eps used to choose them.
struct HypoCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double eps = 0.0;

  /// Validating constructor: a, b, c > 0, eps >= 0 and c^2 < ab.
  static HypoCoeffs make(double a, double b, double c, double eps = 0.0);

  [[nodiscard]] bool valid() const;

  bool operator==(const HypoCoeffs&) const = default;

  /// (m, M) with m ||f||^2_{H^1} <= |||f|||^2 <= M ||f||^2_{H^1}: the extreme
  /// eigenvalues of diag(1) (+) [[a, c], [c, b]].
  [[nodiscard]] std::pair<double, double> equivalence_bounds() const;
};

}  // namespace levykin
