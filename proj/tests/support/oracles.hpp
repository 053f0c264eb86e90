#pragma once

// Reference solutions computed independently of the library code paths.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

inline double cauchy(double v) { return 1.0 / (std::numbers::pi * (1.0 + v * v)); }

inline double cauchy_gradient(double v) {
  const double d = 1.0 + v * v;
  return -2.0 * v / (std::numbers::pi * d * d);
}

/// Closed-form kernel constant of the fractional Laplacian in d dimensions.
inline double frac_constant(double alpha, int d) {
  const double pi = std::numbers::pi;
  return alpha * std::pow(2.0, alpha - 1.0) * std::tgamma((d + alpha) / 2.0) /
         (std::pow(pi, d / 2.0) * std::tgamma(1.0 - alpha / 2.0));
}

/// int_0^t |k + (xi - k) e^{-s}|^alpha ds, split where the base crosses zero.
inline double characteristic_exponent(double xi, double k, double alpha, double t) {
  using Q = boost::math::quadrature::gauss_kronrod<double, 61>;
  const auto f = [&](double s) { return std::pow(std::abs(k + (xi - k) * std::exp(-s)), alpha); };
  double lo = 0.0, total = 0.0;
  if (xi != k && k / (k - xi) > 0.0) {
    const double s0 = -std::log(k / (k - xi));
    if (s0 > 0.0 && s0 < t) {
      total += Q::integrate(f, 0.0, s0, 15, 1e-15);
      lo = s0;
    }
  }
  return total + Q::integrate(f, lo, t, 15, 1e-15);
}

/// Fourier transform (F g = int e^{-i v xi} g) at time t of the x-mode k of
/// the kinetic Levy-Fokker-Planck solution, from its transform at t = 0.
inline std::complex<double> kinetic_mode(const std::function<std::complex<double>(double)>& g0_hat, double k,
                                         double xi, double alpha, double t) {
  return g0_hat(k + (xi - k) * std::exp(-t)) * std::exp(-characteristic_exponent(xi, k, alpha, t));
}

/// Same for x-independent data, where the exponent integrates in closed form.
inline std::complex<double> homogeneous_mode(const std::function<std::complex<double>(double)>& g0_hat, double xi,
                                             double alpha, double t) {
  return g0_hat(xi * std::exp(-t)) * std::exp(-std::pow(std::abs(xi), alpha) * (1.0 - std::exp(-alpha * t)) / alpha);
}

/// Classical RK4 on d/ds log G = -|xi e^{-(t-s)}|^alpha along a characteristic,
/// an ODE cross-check of homogeneous_mode that avoids the closed form.
inline std::complex<double> homogeneous_mode_rk4(const std::function<std::complex<double>(double)>& g0_hat, double xi,
                                                 double alpha, double t, int steps) {
  const auto rhs = [&](double s) { return -std::pow(std::abs(xi * std::exp(-(t - s))), alpha); };
  const double h = t / steps;
  double phase = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double s = i * h;
    const double k1 = rhs(s), k2 = rhs(s + h / 2), k4 = rhs(s + h);
    phase += h * (k1 + 4.0 * k2 + k4) / 6.0;
  }
  return g0_hat(xi * std::exp(-t)) * std::exp(phase);
}

}  // namespace oracle
