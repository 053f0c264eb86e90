#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "levykin/grid.hpp"

namespace levykin::spectral {

using cplx = std::complex<double>;

/// Unnormalized DFT of length n: out_j = sum_i in_i exp(-2 pi i ij/n) (sign = -1)
/// or exp(+...) (sign = +1). Plans are cached per (n, sign) and shared.
void dft(std::span<const cplx> in, std::span<cplx> out, int sign);

/// Samples of the continuous transform ghat(xi_j) = int e^{-i v xi_j} g(v) dv
/// at the dual modes of the grid (rectangle rule on the lattice).
std::vector<cplx> forward(const VelocityGrid& grid, std::span<const double> g);
std::vector<cplx> forward(const VelocityGrid& grid, std::span<const cplx> g);

/// Inverse of `forward`: g(v_i) = (1/2pi) sum_j ghat_j e^{i v_i xi_j} dxi.
std::vector<cplx> inverse(const VelocityGrid& grid, std::span<const cplx> ghat);
std::vector<double> inverse_real(const VelocityGrid& grid, std::span<const cplx> ghat);

/// Multiplies the spectrum by symbol(xi) and transforms back (real part).
std::vector<double> apply_symbol(const VelocityGrid& grid, std::span<const double> g,
                                 const std::function<cplx(double)>& symbol);

/// Periodic spectral derivative d^order/dv^order. The Nyquist mode is
/// dropped for odd orders so that real data stays real.
std::vector<double> derivative(const VelocityGrid& grid, std::span<const double> g, int order = 1);
std::vector<cplx> derivative(const VelocityGrid& grid, std::span<const cplx> g, int order = 1);

}  // namespace levykin::spectral
