#include "levykin/forms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "levykin/equilibrium.hpp"
#include "levykin/errors.hpp"
#include "levykin/fracops.hpp"
#include "levykin/numerics.hpp"
#include "levykin/spectral.hpp"

namespace levykin {
namespace {

struct LatticeTables {
  std::vector<double> kern;
  std::vector<double> left;
  std::vector<double> right;
  double corr = 0.0;
};

LatticeTables lattice_tables(const VelocityGrid& grid, double alpha) {
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  LatticeTables t;
  t.kern.assign(n + 1, 0.0);
  for (std::size_t m = 1; m <= n; ++m) t.kern[m] = std::pow(static_cast<double>(m) * h, -1.0 - alpha);
  t.left.resize(n);
  t.right.resize(n);
  const double ha = std::pow(h, -alpha);
  for (std::size_t i = 0; i < n; ++i) {
    t.left[i] = ha * numerics::hurwitz_zeta(1.0 + alpha, static_cast<double>(i + 1));
    t.right[i] = ha * numerics::hurwitz_zeta(1.0 + alpha, static_cast<double>(n - i));
  }
  t.corr = -2.0 * numerics::riemann_zeta(alpha - 1.0) * std::pow(h, 2.0 - alpha);
  return t;
}

// sum_{j != i} (x_i - x_j)(y_i - y_j) K_{|i-j|}, fixed order.
double pair_sum(std::span<const double> x, std::span<const double> y, std::size_t i, const std::vector<double>& kern) {
  const std::size_t n = x.size();
  double s = 0.0;
  for (std::size_t j = 0; j < i; ++j) s += (x[i] - x[j]) * (y[i] - y[j]) * kern[i - j];
  for (std::size_t j = i + 1; j < n; ++j) s += (x[i] - x[j]) * (y[i] - y[j]) * kern[j - i];
  return s;
}

double raw_double_sum(const VelocityGrid& grid, const LatticeTables& t, std::span<const double> u, int fd_accuracy) {
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  const auto du = numerics::FiniteDifference(1, fd_accuracy, h, n).apply(u);
  std::vector<double> row(n);
  const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) num_threads(numerics::thread_count())
  for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    // The exterior appears twice: (v inside, w outside) and its mirror.
    row[i] = h * pair_sum(u, u, i, t.kern) + 2.0 * u[i] * u[i] * (t.left[i] + t.right[i]) + t.corr * du[i] * du[i];
  }
  double s = 0.0;
  for (double r : row) s += r;
  return s * h;
}

}  // namespace

double h_alpha_half_symbol(const VelocityGrid& grid, double alpha, std::span<const double> u) {
  const auto hat = spectral::forward(grid, u);
  double s = 0.0;
  for (std::size_t j = 0; j < hat.size(); ++j) s += std::pow(std::abs(grid.dual_mode(j)), alpha) * std::norm(hat[j]);
  const double dxi = grid.dual_spacing();
  s *= dxi;
  // Leading cusp term of the |xi|^alpha lattice sum at xi = 0.
  s -= 2.0 * numerics::riemann_zeta(-alpha) * std::norm(hat[0]) * std::pow(dxi, 1.0 + alpha);
  return s / (2.0 * std::numbers::pi);
}

double h_alpha_half_raw(const VelocityGrid& grid, double alpha, std::span<const double> u) {
  return raw_double_sum(grid, lattice_tables(grid, alpha), u, 8);
}

double h_alpha_half_normalization(const VelocityGrid& grid, double alpha) {
  std::vector<double> g(grid.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::exp(-0.5 * grid.node(i) * grid.node(i));
  return h_alpha_half_symbol(grid, alpha, g) / h_alpha_half_raw(grid, alpha, g);
}

HAlphaHalf h_alpha_half_norm(const VelocityField& g, const AlphaParams& p) {
  const double a = AlphaParams::make(p.alpha, p.dim).alpha;
  HAlphaHalf r;
  r.symbol = h_alpha_half_symbol(g.grid(), a, g.values());
  r.normalization = h_alpha_half_normalization(g.grid(), a);
  r.double_integral = r.normalization * h_alpha_half_raw(g.grid(), a, g.values());
  r.relative_deviation = r.symbol > 0.0 ? std::abs(r.double_integral - r.symbol) / r.symbol : std::abs(r.double_integral);
  return r;
}

WeightedL2::WeightedL2(VelocityField mu, Derivative derivative, int fd_accuracy)
    : mu_(std::move(mu)), derivative_(derivative), fd_accuracy_(fd_accuracy) {
  if (!mu_.grid_ptr()) throw ValidationError("WeightedL2: empty weight");
  if (!mu_.is_positive() || !mu_.is_finite()) throw ValidationError("weighted space: equilibrium must be positive");
  mu_mass_ = mu_.integral();
}

double WeightedL2::inner(std::span<const double> f, std::span<const double> g) const {
  if (f.size() != grid().size() || g.size() != grid().size()) throw ValidationError("forms: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i] / mu_[i];
  return s * grid().spacing();
}

double WeightedL2::norm2_complex(std::span<const std::complex<double>> f) const {
  if (f.size() != grid().size()) throw ValidationError("forms: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]) / mu_[i];
  return s * grid().spacing();
}

double WeightedL2::inner_complex(std::span<const std::complex<double>> f, std::span<const std::complex<double>> g) const {
  if (f.size() != grid().size() || g.size() != grid().size()) throw ValidationError("forms: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += (f[i] * std::conj(g[i])).real() / mu_[i];
  return s * grid().spacing();
}

std::vector<double> WeightedL2::derivative(std::span<const double> f) const {
  if (derivative_ == Derivative::spectral) return spectral::derivative(grid(), f, 1);
  return numerics::FiniteDifference(1, fd_accuracy_, grid().spacing(), grid().size()).apply(f);
}

std::vector<double> WeightedL2::second_derivative(std::span<const double> f) const {
  if (derivative_ == Derivative::spectral) return spectral::derivative(grid(), f, 2);
  return numerics::FiniteDifference(2, fd_accuracy_, grid().spacing(), grid().size()).apply(f);
}

std::vector<std::complex<double>> WeightedL2::derivative(std::span<const std::complex<double>> f) const {
  if (derivative_ == Derivative::spectral) return spectral::derivative(grid(), f, 1);
  std::vector<double> re(f.size()), im(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    re[i] = f[i].real();
    im[i] = f[i].imag();
  }
  const auto dr = derivative(std::span<const double>(re));
  const auto di = derivative(std::span<const double>(im));
  std::vector<std::complex<double>> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = {dr[i], di[i]};
  return out;
}

double WeightedL2::mass(std::span<const double> f) const {
  double s = 0.0;
  for (double v : f) s += v;
  return s * grid().spacing();
}

VelocityField WeightedL2::project(const VelocityField& f) const {
  require_same_grid(f, mu_, "project_equilibrium");
  VelocityField out = mu_;
  out *= mass(f.values()) / mu_mass_;
  return out;
}

FormContext::FormContext(VelocityField mu, double alpha, Derivative derivative, int fd_accuracy, double weight_cap)
    : WeightedL2(std::move(mu), derivative, fd_accuracy),
      alpha_(AlphaParams::make(alpha).alpha),
      C_(frac_constant({alpha_, 1}).value),
      weight_cap_(weight_cap) {
  auto t = lattice_tables(grid(), alpha_);
  kern_ = std::move(t.kern);
  ext_left_ = std::move(t.left);
  ext_right_ = std::move(t.right);
  corr_ = t.corr;
  h_norm_ = h_alpha_half_normalization(grid(), alpha_);
}

std::vector<double> FormContext::ratio(std::span<const double> f) const {
  if (f.size() != grid().size()) throw ValidationError("forms: field size does not match the grid");
  const auto& m = mu();
  std::vector<double> F(f.size());
  double l2 = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    F[i] = f[i] / m[i];
    l2 += f[i] * F[i];
    peak = std::max(peak, std::abs(F[i]));
  }
  l2 = std::sqrt(l2 * grid().spacing());
  if (!std::isfinite(peak) || peak > weight_cap_ * std::max(1.0, l2)) {
    throw ValidationError("forms: f/mu exceeds the weight cap near the velocity boundary (max |f/mu| = " +
                          std::to_string(peak) + ")");
  }
  return F;
}

namespace {

// (C/2) sum_i h mu_i [h sum_{j != i} P(i, j) K_{|i-j|} + exterior + corr D_i],
// with the interior double sum folded onto j > i using (mu_i + mu_j).
template <class Pair>
double assemble_s(const Pair& pair, std::span<const double> dprod, std::span<const double> m, std::size_t n, double h,
                  const std::vector<double>& kern, const std::vector<double>& left, const std::vector<double>& right,
                  double corr, double C) {
  std::vector<double> row(n);
  const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 64) num_threads(numerics::thread_count())
  for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double inner = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) inner += (m[i] + m[j]) * pair(i, j) * kern[j - i];
    row[i] = h * inner + m[i] * (pair(i, 0) * left[i] + pair(i, n - 1) * right[i] + corr * dprod[i]);
  }
  double total = 0.0;
  for (double r : row) total += r;
  return 0.5 * C * h * total;
}

}  // namespace

double FormContext::s_form(std::span<const double> f, std::span<const double> g) const {
  const auto F = ratio(f);
  const auto G = ratio(g);
  const auto dF = derivative(std::span<const double>(F));
  const auto dG = derivative(std::span<const double>(G));
  const std::size_t n = F.size();
  std::vector<double> dprod(n);
  for (std::size_t i = 0; i < n; ++i) dprod[i] = dF[i] * dG[i];
  const auto pair = [&](std::size_t i, std::size_t j) { return (F[i] - F[j]) * (G[i] - G[j]); };
  return assemble_s(pair, dprod, mu().values(), n, grid().spacing(), kern_, ext_left_, ext_right_, corr_, C_);
}

double FormContext::a_form(std::span<const double> f, std::span<const double> g) const {
  const auto F = ratio(f);
  const auto G = ratio(g);
  const std::size_t n = F.size();
  const double h = grid().spacing();
  const auto& m = mu();
  const auto dF = derivative(std::span<const double>(F));
  const auto dG = derivative(std::span<const double>(G));
  const auto d2F = second_derivative(F);
  const auto d2G = second_derivative(G);
  std::vector<double> row(n);
  const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) num_threads(numerics::thread_count())
  for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double sf = 0.0, sg = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      sf += F[j] * kern_[i - j];
      sg += G[j] * kern_[i - j];
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      sf += F[j] * kern_[j - i];
      sg += G[j] * kern_[j - i];
    }
    double s = h * (G[i] * sf - F[i] * sg);
    s += (F[0] * G[i] - F[i] * G[0]) * ext_left_[i];
    s += (F[n - 1] * G[i] - F[i] * G[n - 1]) * ext_right_[i];
    s += 0.5 * corr_ * (d2F[i] * G[i] - F[i] * d2G[i]);
    const double nonlocal = 0.5 * C_ * m[i] * s;
    const double drift = 0.5 * grid().node(i) * (f[i] * dG[i] - g[i] * dF[i]);
    row[i] = nonlocal + drift;
  }
  double total = 0.0;
  for (double r : row) total += r;
  return h * total;
}

double FormContext::s_form(const VelocityField& f, const VelocityField& g) const {
  require_same_grid(f, mu(), "s_form");
  require_same_grid(g, mu(), "s_form");
  return s_form(f.values(), g.values());
}

double FormContext::a_form(const VelocityField& f, const VelocityField& g) const {
  require_same_grid(f, mu(), "a_form");
  require_same_grid(g, mu(), "a_form");
  return a_form(f.values(), g.values());
}

double FormContext::s_form_complex(std::span<const std::complex<double>> f) const {
  const std::size_t n = f.size();
  std::vector<double> re(n), im(n);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = f[i].real();
    im[i] = f[i].imag();
  }
  const auto R = ratio(re);
  const auto I = ratio(im);
  const auto dR = derivative(std::span<const double>(R));
  const auto dI = derivative(std::span<const double>(I));
  std::vector<double> dprod(n);
  for (std::size_t i = 0; i < n; ++i) dprod[i] = dR[i] * dR[i] + dI[i] * dI[i];
  const auto pair = [&](std::size_t i, std::size_t j) {
    const double a = R[i] - R[j], b = I[i] - I[j];
    return a * a + b * b;
  };
  return assemble_s(pair, dprod, mu().values(), n, grid().spacing(), kern_, ext_left_, ext_right_, corr_, C_);
}

HAlphaHalf FormContext::h_alpha_half(std::span<const double> u) const {
  HAlphaHalf r;
  r.symbol = h_alpha_half_symbol(grid(), alpha_, u);
  r.normalization = h_norm_;
  r.double_integral = h_norm_ * raw_double_sum(grid(), {kern_, ext_left_, ext_right_, corr_}, u, fd_accuracy());
  r.relative_deviation = r.symbol > 0.0 ? std::abs(r.double_integral - r.symbol) / r.symbol : std::abs(r.double_integral);
  return r;
}

WeightedNorms FormContext::weighted_norms(const VelocityField& f) const {
  require_same_grid(f, mu(), "weighted_norms");
  WeightedNorms w;
  const double l2 = norm2(f.values());
  const auto df = derivative(f.values());
  const double g2 = norm2(df);
  std::vector<double> u(f.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = f[i] / std::sqrt(mu()[i]);
  w.l2_weighted = std::sqrt(l2);
  w.grad_weighted = std::sqrt(g2);
  w.h1_weighted = std::sqrt(l2 + g2);
  w.h_alpha_half = std::sqrt(l2 + h_alpha_half_symbol(grid(), alpha_, u));
  return w;
}

VelocityField project_equilibrium(const VelocityField& f, const VelocityField& mu) {
  require_same_grid(f, mu, "project_equilibrium");
  double mf = f.integral(), mm = mu.integral();
  if (!(mm > 0.0)) throw ValidationError("project_equilibrium: equilibrium has no mass");
  VelocityField out = mu;
  out *= mf / mm;
  return out;
}

double s_form(const VelocityField& f, const VelocityField& g, const VelocityField& mu, const AlphaParams& p) {
  return FormContext(mu, p.alpha).s_form(f, g);
}

double a_form(const VelocityField& f, const VelocityField& g, const VelocityField& mu, const AlphaParams& p) {
  return FormContext(mu, p.alpha).a_form(f, g);
}

DecompositionResidual decomposition_residual(const VelocityField& f, const VelocityField& g, const FormContext& ctx) {
  require_same_grid(f, ctx.mu(), "decomposition_residual");
  require_same_grid(g, ctx.mu(), "decomposition_residual");
  const double a = ctx.alpha();
  const std::size_t n = f.size();
  const double Fl = f[0] / ctx.mu()[0];
  const double Fr = f[n - 1] / ctx.mu()[n - 1];
  PvOptions opts;
  opts.extension = Extension::analytic;
  opts.tail = [=](double w) { return (w < 0.0 ? Fl : Fr) * equilibrium_tail_series(w, a); };
  const auto Lf = levy_fp_apply(f, {a, 1}, FracMethod::pv_quadrature, opts);
  DecompositionResidual r;
  r.lhs = -ctx.inner(Lf.values(), g.values());
  r.s = ctx.s_form(f, g);
  r.a = ctx.a_form(f, g);
  const double V = ctx.grid().extent();
  const double Gl = g[0] / ctx.mu()[0];
  const double Gr = g[n - 1] / ctx.mu()[n - 1];
  r.boundary_flux = -V * equilibrium_tail_series(V, a) * (Fl * Gl + Fr * Gr);
  r.absolute = std::abs(r.lhs - r.s - r.a - r.boundary_flux);
  r.absolute_raw = std::abs(r.lhs - r.s - r.a);
  const double scale = std::max(std::abs(r.lhs), std::sqrt(ctx.s_form(f, f) * ctx.s_form(g, g)));
  r.relative = scale > 0.0 ? r.absolute / scale : r.absolute;
  r.relative_raw = scale > 0.0 ? r.absolute_raw / scale : r.absolute_raw;
  return r;
}

}  // namespace levykin
