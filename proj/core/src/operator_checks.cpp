#include "levykin/operator_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "levykin/equilibrium.hpp"
#include "levykin/errors.hpp"
#include "levykin/probes.hpp"

namespace levykin {
namespace {

struct Packet {
  double width, freq, center, phase;
  // Second v-derivative of exp(-x^2/2) cos(w v + phi), x = (v - c)/s.
  double operator()(double v) const {
    const double x = (v - center) / width;
    const double arg = freq * v + phase;
    const double e = std::exp(-0.5 * x * x);
    return e * (((x * x - 1.0) / (width * width) - freq * freq) * std::cos(arg) + 2.0 * x / width * freq * std::sin(arg));
  }
};

Packet packet(std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + k);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Packet p{};
  p.width = 1.0 + 2.0 * u(rng);
  p.freq = 2.0 * u(rng);
  p.center = -4.0 + 8.0 * u(rng);
  p.phase = 2.0 * 3.141592653589793 * u(rng);
  return p;
}

double inner_error(const VelocityField& a, const VelocityField& b) {
  const auto& grid = a.grid();
  const double half = 0.5 * grid.extent();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid.node(i)) > half) continue;
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += a[i] * a[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::pair<double, double> cross_errors(double alpha, const GridPtr& grid, std::size_t probes, std::uint64_t seed) {
  const auto p = AlphaParams::make(alpha, 1);
  PvOptions periodic;
  periodic.extension = Extension::periodic;
  double worst_p = 0.0, worst_z = 0.0;
  for (std::size_t k = 0; k < probes; ++k) {
    const auto g = sample(grid, packet(k, seed));
    const auto F = frac_laplacian_fourier(g, p);
    worst_p = std::max(worst_p, inner_error(F, frac_laplacian_quadrature(g, p, periodic)));
    worst_z = std::max(worst_z, inner_error(F, frac_laplacian_quadrature(g, p)));
  }
  return {worst_p, worst_z};
}

double annihilation_residual(double alpha, const GridPtr& grid) {
  const auto mu = equilibrium_density(alpha, grid);
  PvOptions o;
  o.extension = Extension::analytic;
  o.tail = [alpha](double w) { return equilibrium_tail_series(w, alpha); };
  const auto L = levy_fp_apply(mu, AlphaParams::make(alpha, 1), FracMethod::pv_quadrature, o);
  double s = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i) s += L[i] * L[i] / mu[i];
  return std::sqrt(s * grid->spacing());
}

}  // namespace

std::vector<VelocityField> band_limited_probes(const GridPtr& grid, std::size_t count, std::uint64_t seed) {
  std::vector<VelocityField> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(sample(grid, packet(k, seed)));
  return out;
}

bool CrossValidation::converging(double floor) const {
  for (std::size_t i = 1; i < periodic.size(); ++i) {
    if (periodic[i - 1] > floor && periodic[i] > periodic[i - 1]) return false;
    if (periodic[i - 1] <= floor && periodic[i] > floor) return false;
  }
  return true;
}

CrossValidation cross_validate(double alpha, double extent, const std::vector<std::size_t>& nodes, std::size_t probes,
                               std::uint64_t seed) {
  CrossValidation cv;
  for (std::size_t n : nodes) {
    const auto [p, z] = cross_errors(alpha, std::make_shared<const VelocityGrid>(extent, n), probes, seed);
    cv.nodes.push_back(n);
    cv.periodic.push_back(p);
    cv.zero_extension.push_back(z);
  }
  return cv;
}

Annihilation equilibrium_annihilation(double alpha, const VelocityGrid& grid) {
  Annihilation a;
  a.nodes = grid.size();
  a.residual = annihilation_residual(alpha, std::make_shared<const VelocityGrid>(grid));
  a.residual_refined = annihilation_residual(alpha, std::make_shared<const VelocityGrid>(grid.extent(), 2 * grid.size()));
  return a;
}

StructureChecks structure_checks(double alpha, const GridPtr& grid, std::size_t probes, std::uint64_t seed) {
  const auto p = AlphaParams::make(alpha, 1);
  const std::size_t n = grid->size();
  const double h = grid->spacing();
  StructureChecks r;
  r.min_energy = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < probes; ++k) {
    const auto g = sample(grid, packet(k, seed));
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm2 += g[i] * g[i] * h;
    const auto L = levy_fp_apply(g, p, FracMethod::fourier_symbol);
    r.max_mass_defect = std::max(r.max_mass_defect, std::abs(L.integral()) / std::sqrt(norm2));
    for (const auto& D : {frac_laplacian_fourier(g, p), frac_laplacian_quadrature(g, p)}) {
      double e = 0.0;
      for (std::size_t i = 0; i < n; ++i) e += D[i] * g[i] * h;
      r.min_energy = std::min(r.min_energy, e / norm2);
    }
  }

  // (-Delta)^{a/2}[g(l .)](v) = l^a ((-Delta)^{a/2} g)(l v), compared where
  // both sides sit on grid nodes (v_i = -V + i h maps to 2 v_i = v_{2i - n/2}).
  const auto base = [](double v) { return std::exp(-0.5 * v * v); };
  const auto D = frac_laplacian_fourier(sample(grid, base), p);
  const auto D2 = frac_laplacian_fourier(sample(grid, [&](double v) { return base(2.0 * v); }), p);
  const auto Dh = frac_laplacian_fourier(sample(grid, [&](double v) { return base(0.5 * v); }), p);
  double scale = 0.0, err = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(D2[i]));
  for (std::size_t i = n / 4; i < 3 * n / 4; ++i) {
    const std::size_t j = 2 * i - n / 2;  // node of 2 v_i
    err = std::max(err, std::abs(D2[i] - std::pow(2.0, alpha) * D[j]));
  }
  double err_half = 0.0, scale_half = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale_half = std::max(scale_half, std::abs(D[i]));
  for (std::size_t i = n / 4; i < 3 * n / 4; ++i) {
    const std::size_t j = 2 * i - n / 2;
    err_half = std::max(err_half, std::abs(D[i] - std::pow(2.0, alpha) * Dh[j]));
  }
  r.max_scaling_error = std::max(err / scale, err_half / scale_half);
  return r;
}

DecompositionChecks decomposition_checks(const FormContext& ctx, std::size_t pairs, std::uint64_t seed) {
  const auto family = make_probe_family(ctx, 2 * pairs, seed);
  DecompositionChecks r;
  r.pairs = pairs;
  r.min_s_diagonal = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto& f = family.members[2 * k].field;
    const auto& g = family.members[2 * k + 1].field;
    const auto res = decomposition_residual(f, g, ctx);
    r.max_relative_residual = std::max(r.max_relative_residual, res.relative);
    const double sfg = ctx.s_form(f, g), sgf = ctx.s_form(g, f);
    const double sff = ctx.s_form(f, f), sgg = ctx.s_form(g, g);
    r.max_symmetry_defect = std::max(r.max_symmetry_defect, std::abs(sfg - sgf));
    r.max_skew_defect = std::max(r.max_skew_defect, std::abs(ctx.a_form(f, g) + ctx.a_form(g, f)));
    r.max_diagonal_skew = std::max(r.max_diagonal_skew, std::abs(ctx.a_form(f, f)));
    r.min_s_diagonal = std::min({r.min_s_diagonal, sff, sgg});
    if (sff > 0.0 && sgg > 0.0) {
      r.max_cauchy_schwarz_excess = std::max(r.max_cauchy_schwarz_excess, std::abs(sfg) / std::sqrt(sff * sgg) - 1.0);
    }
  }
  return r;
}

}  // namespace levykin
