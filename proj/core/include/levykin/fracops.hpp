#pragma once

#include <functional>

#include "levykin/grid.hpp"

namespace levykin {

/// C_{d,alpha} = 2^alpha Gamma((d+alpha)/2) / (pi^{d/2} |Gamma(-alpha/2)|).
struct FracKernelConstant {
  double value = 0.0;
  AlphaParams params;
};
FracKernelConstant frac_constant(const AlphaParams& p);

enum class FracMethod { fourier_symbol, pv_quadrature };

/// How the singular-integral discretization treats w outside [-V, V).
enum class Extension {
  zero,      // g = 0 outside
  constant,  // g frozen at its edge values
  analytic,  // caller-supplied tail function
  periodic,  // g repeated with period 2V (the operator the Fourier path applies)
};

struct PvOptions {
  Extension extension = Extension::zero;
  /// g(w) for |w| >= V; required for Extension::analytic.
  std::function<double(double)> tail;
  /// Width (in v units, at least 64 nodes) of the exterior lattice summed
  /// explicitly before switching to an adaptive integral of the tail
  /// (analytic extension only).
  double explicit_width = 8.0;
  /// Number of singular-cell corrections h^{2j-alpha} g^{(2j)} kept (1..3).
  int corrections = 3;
  /// Formal order of the finite differences used by the corrections and by
  /// the quadrature path's drift term.
  int fd_accuracy = 8;
  /// Relative edge level above which a zero extension is reported.
  double boundary_floor = 1e-6;
};

struct PvReport {
  double boundary_level = 0.0;       // max(|g_0|, |g_{n-1}|) / max|g|
  double truncation_estimate = 0.0;  // C * edge value * V^{-alpha} / alpha (zero extension)
  bool boundary_warning = false;
};

/// Inverse DFT of |xi|^alpha times the DFT of g (periodic contract).
VelocityField frac_laplacian_fourier(const VelocityField& g, const AlphaParams& p);

/// Principal-value quadrature of C int (g(v) - g(w)) |v - w|^{-1-alpha} dw:
/// symmetric lattice pairing around each node plus singular-cell
/// corrections, with the exterior handled per `opts.extension`.
VelocityField frac_laplacian_quadrature(const VelocityField& g, const AlphaParams& p, const PvOptions& opts = {},
                                        PvReport* report = nullptr);

/// L_alpha g = d/dv (v g) - (-Delta)^{alpha/2} g. The Fourier path uses a
/// spectral derivative for the drift, the quadrature path finite differences.
VelocityField levy_fp_apply(const VelocityField& g, const AlphaParams& p, FracMethod method,
                            const PvOptions& opts = {});

/// d/dv (v g) alone, spectral or by finite differences.
VelocityField drift_divergence(const VelocityField& g, FracMethod method, int fd_accuracy = 8);

}  // namespace levykin
