#include "levykin/equilibrium.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "levykin/errors.hpp"
#include "levykin/numerics.hpp"
#include "levykin/spectral.hpp"

namespace levykin {
namespace {

constexpr int kGaussPoints = 20;
constexpr double kPanel = 0.25;
constexpr int kGradedLevels = 50;
constexpr double kProfileCutoff = 1e-18;
constexpr std::size_t kResync = 64;

void add_panel(double a, double b, double alpha, std::vector<double>& nodes, std::vector<double>& weights) {
  using Rule = boost::math::quadrature::gauss<double, kGaussPoints>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t k = 0; k < x.size(); ++k) {
    for (double sgn : {-1.0, 1.0}) {
      const double xi = mid + sgn * half * x[k];
      nodes.push_back(xi);
      weights.push_back(half * w[k] * equilibrium_fourier(xi, alpha) / std::numbers::pi);
    }
  }
}

}  // namespace

double equilibrium_fourier(double xi, double alpha) { return std::exp(-std::pow(std::abs(xi), alpha) / alpha); }

EquilibriumEvaluator::EquilibriumEvaluator(double alpha) : alpha_(AlphaParams::make(alpha).alpha) {
  double hi = kPanel;
  for (int j = 0; j < kGradedLevels; ++j) {
    const double lo = 0.5 * hi;
    add_panel(lo, hi, alpha_, nodes_, weights_);
    hi = lo;
  }
  const double cutoff = std::pow(-alpha_ * std::log(kProfileCutoff), 1.0 / alpha_);
  for (double a = kPanel; a < cutoff; a += kPanel) add_panel(a, a + kPanel, alpha_, nodes_, weights_);
}

double EquilibriumEvaluator::density(double v) const {
  double s = 0.0;
  for (std::size_t q = 0; q < nodes_.size(); ++q) s += weights_[q] * std::cos(v * nodes_[q]);
  return s;
}

double EquilibriumEvaluator::gradient(double v) const {
  double s = 0.0;
  for (std::size_t q = 0; q < nodes_.size(); ++q) s -= weights_[q] * nodes_[q] * std::sin(v * nodes_[q]);
  return s;
}

std::vector<double> EquilibriumEvaluator::density_lattice(double v0, double h, std::size_t count) const {
  return lattice_sum(v0, h, count, false);
}

std::vector<double> EquilibriumEvaluator::gradient_lattice(double v0, double h, std::size_t count) const {
  return lattice_sum(v0, h, count, true);
}

// Blocks of kResync consecutive nodes share one exact (cos, sin) seed per
// quadrature node and advance it by rotation; each output keeps a fixed
// summation order over q, so the result is thread-count independent.
std::vector<double> EquilibriumEvaluator::lattice_sum(double v0, double h, std::size_t count, bool derivative) const {
  std::vector<double> out(count, 0.0);
  const auto blocks = static_cast<std::ptrdiff_t>((count + kResync - 1) / kResync);
#pragma omp parallel for schedule(static) num_threads(numerics::thread_count())
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t start = static_cast<std::size_t>(b) * kResync;
    const std::size_t len = std::min(kResync, count - start);
    double acc[kResync] = {};
    const double vs = v0 + static_cast<double>(start) * h;
    for (std::size_t q = 0; q < nodes_.size(); ++q) {
      const double xi = nodes_[q];
      double c = std::cos(vs * xi), s = std::sin(vs * xi);
      const double rc = std::cos(h * xi), rs = std::sin(h * xi);
      const double w = derivative ? -weights_[q] * xi : weights_[q];
      for (std::size_t i = 0; i < len; ++i) {
        acc[i] += w * (derivative ? s : c);
        const double cn = c * rc - s * rs;
        s = s * rc + c * rs;
        c = cn;
      }
    }
    for (std::size_t i = 0; i < len; ++i) out[start + i] = acc[i];
  }
  return out;
}

double equilibrium_tail_series(double v, double alpha, int terms) {
  const double w = std::abs(v);
  double s = 0.0;
  for (int k = 1; k <= terms; ++k) {
    const double ka = k * alpha;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    const double coef = std::exp(std::lgamma(ka + 1.0) - std::lgamma(k + 1.0) - k * std::log(alpha));
    s += sign * coef * std::sin(ka * std::numbers::pi / 2.0) * std::pow(w, -1.0 - ka);
  }
  return s / std::numbers::pi;
}

void require_resolved(double alpha, const VelocityGrid& grid, double floor) {
  AlphaParams::make(alpha);
  const double tail = equilibrium_fourier(grid.max_frequency(), alpha);
  if (!(tail < floor)) {
    throw ValidationError("velocity grid does not resolve the equilibrium profile: exp(-xi_max^a/a) = " +
                          std::to_string(tail) + " >= floor " + std::to_string(floor) +
                          "; increase the node count");
  }
}

VelocityField equilibrium_density(double alpha, const GridPtr& grid, double floor) {
  require_resolved(alpha, *grid, floor);
  EquilibriumEvaluator eval(alpha);
  auto values = eval.density_lattice(-grid->extent(), grid->spacing(), grid->size());
  // Exact evenness: average the mirror pairs v_i, v_{n-i}.
  const std::size_t n = grid->size();
  for (std::size_t i = 1; i < n / 2; ++i) {
    const double m = 0.5 * (values[i] + values[n - i]);
    values[i] = values[n - i] = m;
  }
  VelocityField mu(grid, std::move(values));
  if (!mu.is_positive()) throw NumericalError("equilibrium density is not positive on the grid");
  return mu;
}

VelocityField equilibrium_gradient(double alpha, const GridPtr& grid, double floor) {
  require_resolved(alpha, *grid, floor);
  EquilibriumEvaluator eval(alpha);
  auto values = eval.gradient_lattice(-grid->extent(), grid->spacing(), grid->size());
  const std::size_t n = grid->size();
  for (std::size_t i = 1; i < n / 2; ++i) {
    const double m = 0.5 * (values[i] - values[n - i]);
    values[i] = m;
    values[n - i] = -m;
  }
  values[n / 2] = 0.0;
  return VelocityField(grid, std::move(values));
}

VelocityField periodized_equilibrium(double alpha, const GridPtr& grid, double floor) {
  require_resolved(alpha, *grid, floor);
  std::vector<spectral::cplx> hat(grid->size());
  for (std::size_t j = 0; j < hat.size(); ++j) hat[j] = equilibrium_fourier(grid->dual_mode(j), alpha);
  VelocityField mu(grid, spectral::inverse_real(*grid, hat));
  if (!mu.is_positive()) throw NumericalError("periodized equilibrium is not positive on the grid");
  return mu;
}

double tail_exponent_fit(const VelocityField& mu, std::pair<double, double> window) {
  const auto& g = mu.grid();
  const auto [lo, hi] = window;
  if (!(lo > 0.0 && hi > lo && hi < g.extent())) {
    throw ValidationError("tail window must satisfy 0 < lo < hi < V");
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = g.node(i);
    if (v < lo || v > hi) continue;
    if (!(mu[i] > 0.0)) throw ValidationError("tail window contains non-positive density values");
    x.push_back(std::log(v));
    y.push_back(std::log(mu[i]));
  }
  if (x.size() < 8) throw ValidationError("tail window holds fewer than 8 grid points");
  return -numerics::fit_line(x, y).slope;
}

double tail_exponent_fit(const VelocityField& mu) {
  const double V = mu.grid().extent();
  return tail_exponent_fit(mu, {V / 4.0, V / 2.0});
}

TailBoundReport tail_bound_check(const VelocityField& mu, const VelocityField& grad_mu, double alpha, int dim,
                                 double gradient_cutoff) {
  require_same_grid(mu, grad_mu, "tail_bound_check");
  AlphaParams::make(alpha, dim);
  if (!mu.is_finite() || !grad_mu.is_finite()) throw ValidationError("tail_bound_check: non-finite input");
  const auto& g = mu.grid();
  const double p = dim + alpha;
  TailBoundReport r;
  r.gradient_cutoff = gradient_cutoff;
  r.density = {INFINITY, -INFINITY};
  r.gradient = {INFINITY, -INFINITY};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = std::abs(g.node(i));
    const double e1 = (std::pow(v, p) + 1.0) * mu[i];
    r.density.min = std::min(r.density.min, e1);
    r.density.max = std::max(r.density.max, e1);
    if (v < gradient_cutoff) continue;
    const double e2 = (std::pow(v, 2.0 + p) + 1.0) * std::abs(grad_mu[i]) / v;
    r.gradient.min = std::min(r.gradient.min, e2);
    r.gradient.max = std::max(r.gradient.max, e2);
  }
  return r;
}

}  // namespace levykin
