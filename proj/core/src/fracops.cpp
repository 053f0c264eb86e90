#include "levykin/fracops.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "levykin/errors.hpp"
#include "levykin/numerics.hpp"
#include "levykin/spectral.hpp"

namespace levykin {

FracKernelConstant frac_constant(const AlphaParams& p) {
  const auto q = AlphaParams::make(p.alpha, p.dim);
  const double a = q.alpha;
  const double d = q.dim;
  const double value =
      std::pow(2.0, a) * std::tgamma(0.5 * (d + a)) / (std::pow(std::numbers::pi, 0.5 * d) * std::abs(std::tgamma(-0.5 * a)));
  return {value, q};
}

VelocityField frac_laplacian_fourier(const VelocityField& g, const AlphaParams& p) {
  const double a = AlphaParams::make(p.alpha, p.dim).alpha;
  auto out = spectral::apply_symbol(g.grid(), g.values(), [a](double xi) { return std::pow(std::abs(xi), a); });
  return VelocityField(g.grid_ptr(), std::move(out));
}

namespace {

// Sum over the exterior lattice (explicit nodes, then an integral of the
// tail) of h * tail(w) |v - w|^{-1-alpha}, plus the matching g(v) share.
struct ExteriorTail {
  std::vector<double> left;   // tail at v_{-1}, v_{-2}, ...
  std::vector<double> right;  // tail at v_n, v_{n+1}, ...
};

}  // namespace

VelocityField frac_laplacian_quadrature(const VelocityField& g, const AlphaParams& p, const PvOptions& opts,
                                        PvReport* report) {
  const auto params = AlphaParams::make(p.alpha, p.dim);
  const double a = params.alpha;
  const double C = frac_constant(params).value;
  const auto& grid = g.grid();
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  const auto vals = g.values();
  if (!g.is_finite()) throw ValidationError("frac_laplacian_quadrature: non-finite input");
  if (opts.corrections < 0 || opts.corrections > 3) throw ValidationError("PvOptions.corrections must be in 0..3");
  if (opts.extension == Extension::analytic && !opts.tail) throw ValidationError("analytic extension needs a tail");

  const std::size_t M =
      opts.extension == Extension::analytic
          ? std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(opts.explicit_width / h)))
          : 0;

  // Kernel table (m h)^{-1-alpha}, m = 1..n+M.
  std::vector<double> kern(n + M + 1, 0.0);
  for (std::size_t m = 1; m < kern.size(); ++m) kern[m] = std::pow(static_cast<double>(m) * h, -1.0 - a);
  const bool periodic = opts.extension == Extension::periodic;
  if (periodic) {
    // Symmetric in m <-> n - m. Sum over all periodic images: (h n)^{-1-a} [zeta(1+a, m/n) + zeta(1+a, 1 - m/n)].
    const double nn = static_cast<double>(n);
    const double scale = std::pow(h * nn, -1.0 - a);
    for (std::size_t m = 1; m < n; ++m) {
      const double x = static_cast<double>(m) / nn;
      kern[m] = scale * (numerics::hurwitz_zeta(1.0 + a, x) + numerics::hurwitz_zeta(1.0 + a, 1.0 - x));
    }
  }

  // Singular-cell correction coefficients 2 zeta(1+a-2j) h^{2j-a} / (2j)!.
  std::vector<std::vector<double>> derivs;
  std::vector<double> corr;
  for (int j = 1; j <= opts.corrections; ++j) {
    if (periodic) {
      derivs.push_back(spectral::derivative(grid, vals, 2 * j));
    } else {
      derivs.push_back(numerics::FiniteDifference(2 * j, opts.fd_accuracy, h, n).apply(vals));
    }
    corr.push_back(2.0 * numerics::riemann_zeta(1.0 + a - 2.0 * j) * std::pow(h, 2.0 * j - a) / std::tgamma(2.0 * j + 1.0));
  }

  ExteriorTail ext;
  if (opts.extension == Extension::analytic) {
    for (std::size_t m = 1; m <= M; ++m) {
      ext.left.push_back(opts.tail(grid.node(0) - static_cast<double>(m) * h));
      ext.right.push_back(opts.tail(grid.node(0) + static_cast<double>(n + m - 1) * h));
    }
  }
  const double left_cut = grid.node(0) - (static_cast<double>(M) + 0.5) * h;
  const double right_cut = grid.node(0) + (static_cast<double>(n + M) - 0.5) * h;

  std::vector<double> out(n);
  const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) num_threads(numerics::thread_count())
  for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double gi = vals[i];
    double s = 0.0;
    for (std::size_t j = 0; j < i; ++j) s += (gi - vals[j]) * kern[i - j];
    for (std::size_t j = i + 1; j < n; ++j) s += (gi - vals[j]) * kern[j - i];
    s *= h;
    const double ha = std::pow(h, -a);
    const double zl = numerics::hurwitz_zeta(1.0 + a, static_cast<double>(i + 1));
    const double zr = numerics::hurwitz_zeta(1.0 + a, static_cast<double>(n - i));
    switch (opts.extension) {
      case Extension::periodic:
        break;
      case Extension::zero:
        s += gi * ha * (zl + zr);
        break;
      case Extension::constant:
        s += ha * ((gi - vals[0]) * zl + (gi - vals[n - 1]) * zr);
        break;
      case Extension::analytic: {
        const double vi = grid.node(i);
        double e = 0.0;
        for (std::size_t m = 1; m <= M; ++m) {
          e += (gi - ext.left[m - 1]) * kern[i + m];
          e += (gi - ext.right[m - 1]) * kern[n + m - 1 - i];
        }
        e *= h;
        // Remaining lattice: g_i share in closed form, tail share as an integral.
        e += gi * ha *
             (numerics::hurwitz_zeta(1.0 + a, static_cast<double>(i + M + 1)) +
              numerics::hurwitz_zeta(1.0 + a, static_cast<double>(n + M - i)));
        boost::math::quadrature::exp_sinh<double> integrator;
        const auto& tail = opts.tail;
        const double far_r = integrator.integrate(
            [&](double u) { return tail(right_cut + u) * std::pow(right_cut + u - vi, -1.0 - a); });
        const double far_l = integrator.integrate(
            [&](double u) { return tail(left_cut - u) * std::pow(vi - left_cut + u, -1.0 - a); });
        s += e - far_r - far_l;
        break;
      }
    }
    for (std::size_t j = 0; j < corr.size(); ++j) s += corr[j] * derivs[j][i];
    out[i] = C * s;
  }

  if (report) {
    double gmax = 0.0;
    for (double v : vals) gmax = std::max(gmax, std::abs(v));
    const double edge = std::max(std::abs(vals[0]), std::abs(vals[n - 1]));
    report->boundary_level = gmax > 0.0 ? edge / gmax : 0.0;
    report->truncation_estimate =
        opts.extension == Extension::zero ? C * edge * std::pow(grid.extent(), -a) / a : 0.0;
    report->boundary_warning = opts.extension == Extension::zero && report->boundary_level > opts.boundary_floor;
  }
  return VelocityField(g.grid_ptr(), std::move(out));
}

VelocityField drift_divergence(const VelocityField& g, FracMethod method, int fd_accuracy) {
  const auto& grid = g.grid();
  std::vector<double> d;
  if (method == FracMethod::fourier_symbol) {
    d = spectral::derivative(grid, g.values(), 1);
  } else {
    d = numerics::FiniteDifference(1, fd_accuracy, grid.spacing(), grid.size()).apply(g.values());
  }
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = g[i] + grid.node(i) * d[i];
  return VelocityField(g.grid_ptr(), std::move(d));
}

VelocityField levy_fp_apply(const VelocityField& g, const AlphaParams& p, FracMethod method, const PvOptions& opts) {
  auto drift = drift_divergence(g, method, opts.fd_accuracy);
  if (method == FracMethod::fourier_symbol) return drift - frac_laplacian_fourier(g, p);
  return drift - frac_laplacian_quadrature(g, p, opts);
}

}  // namespace levykin
