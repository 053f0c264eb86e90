#include "levykin/probes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "levykin/equilibrium.hpp"
#include "levykin/errors.hpp"

namespace levykin {
namespace {

// Randomly rotated Halton points: member `index` of a kind's stream takes
// coordinate d from the radical inverse in base kPrimes[d], shifted mod 1 by
// a seed-dependent offset. The sequence is nested and fills its box evenly.
class Draws {
 public:
  Draws(std::uint64_t seed, ProbeKind kind, std::size_t index) : index_(index + 1) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(kind));
    for (double& s : shift_) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
  double operator()(double lo, double hi) {
    const double u = std::fmod(radical_inverse(index_, kPrimes[dim_]) + shift_[dim_], 1.0);
    ++dim_;
    return lo + (hi - lo) * u;
  }

 private:
  static constexpr unsigned kPrimes[4] = {2, 3, 5, 7};
  static double radical_inverse(std::size_t i, unsigned base) {
    double r = 0.0, f = 1.0 / base;
    for (; i > 0; i /= base, f /= base) r += f * static_cast<double>(i % base);
    return r;
  }
  std::size_t index_;
  std::size_t dim_ = 0;
  double shift_[4];
};

double hermite(int m, double x) {
  double p0 = 1.0, p1 = x;
  if (m == 0) return p0;
  for (int k = 1; k < m; ++k) {
    const double p2 = x * p1 - k * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

VelocityField finish(const FormContext& ctx, std::vector<double> f) {
  VelocityField field(ctx.mu().grid_ptr(), std::move(f));
  field -= ctx.project(field);
  const double norm = std::sqrt(ctx.norm2(field.values()));
  if (norm > 0.0) field *= 1.0 / norm;
  return field;
}

// Members of the first kLeaders rounds sit on a coarse grid over the
// parameter boxes; later members draw from the same boxes, so the family
// maximum converges as the family grows.
constexpr std::size_t kLeaders = 9;
constexpr double kShiftLeaders[kLeaders] = {0.5, -1.0, 1.5, -2.0, 3.0, -0.5, 1.0, -1.5, -3.0};

Probe make_member(const FormContext& ctx, std::size_t k, std::uint64_t seed) {
  const auto& grid = ctx.grid();
  const auto& mu = ctx.mu();
  const std::size_t n = grid.size();
  const std::size_t round = k / 4;
  const bool leader = round < kLeaders;
  std::vector<double> f(n);
  std::ostringstream label;
  switch (k % 4) {
    case 0: {
      Draws u(seed, ProbeKind::hermite, round - std::min(round, kLeaders));
      const int m = leader ? static_cast<int>(round % 3) + 1 : static_cast<int>(u(1.0, 7.0));
      const double sigma = leader ? 1.0 + static_cast<double>(round / 3) : u(1.0, 3.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.node(i) / sigma;
        f[i] = hermite(m, x) * std::exp(-0.25 * x * x) * mu[i];
      }
      label << "hermite(" << m << ", " << sigma << ")";
      return {ProbeKind::hermite, label.str(), finish(ctx, std::move(f))};
    }
    case 1: {
      Draws u(seed, ProbeKind::shifted_equilibrium, round - std::min(round, kLeaders));
      const double c = leader ? kShiftLeaders[round] : u(-3.0, 3.0);
      EquilibriumEvaluator eval(ctx.alpha());
      const auto shifted = eval.density_lattice(grid.node(0) - c, grid.spacing(), n);
      label << "shift(" << c << ")";
      return {ProbeKind::shifted_equilibrium, label.str(), finish(ctx, shifted)};
    }
    case 2:
      if (round == 0) {
        EquilibriumEvaluator eval(ctx.alpha());
        label << "grad_mu";
        return {ProbeKind::equilibrium_gradient, label.str(),
                finish(ctx, eval.gradient_lattice(grid.node(0), grid.spacing(), n))};
      }
      [[fallthrough]];
    default: {
      const bool wide = k % 4 == 3;
      // Two interleaved packet streams (narrow band, wide band).
      Draws u(seed + (wide ? 1 : 0), ProbeKind::gaussian_packet, round);
      const double omega = u(0.0, wide ? 3.0 : 1.5);
      const double phase = u(0.0, 2.0 * std::numbers::pi);
      const double center = u(-4.0, 4.0);
      const double width = u(0.5, wide ? 3.0 : 2.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double z = (grid.node(i) - center) / width;
        f[i] = std::cos(omega * grid.node(i) + phase) * std::exp(-0.5 * z * z) * mu[i];
      }
      label << "packet(k=" << k << ")";
      return {ProbeKind::gaussian_packet, label.str(), finish(ctx, std::move(f))};
    }
  }
}

struct Tabulated {
  std::vector<ProbeFunctionals> plain;
  std::vector<ProbeFunctionals> with_mass;  // f + mu, only when needed
  std::vector<std::string> labels;
};

Tabulated tabulate(const FormContext& ctx, const ProbeFamily& family, bool with_mass) {
  Tabulated t;
  for (const auto& p : family.members) {
    t.labels.push_back(p.label);
    t.plain.push_back(probe_functionals(ctx, p.field));
    if (with_mass) t.with_mass.push_back(probe_functionals(ctx, p.field + ctx.mu()));
  }
  return t;
}

template <class Ratio>
Estimate maximize(const Tabulated& t, double floor, Ratio ratio) {
  Estimate e;
  for (std::size_t k = 0; k < t.plain.size(); ++k) {
    const auto& fn = t.plain[k];
    if (!(fn.s > floor * fn.l2)) {
      ++e.skipped;
      continue;
    }
    const auto r = ratio(fn);
    if (!r) {
      ++e.skipped;
      continue;
    }
    ++e.used;
    if (*r > e.value) {
      e.value = *r;
      e.argmax = t.labels[k];
    }
  }
  if (e.used == 0) throw NumericalError("constant estimation: every probe was degenerate");
  return e;
}

std::optional<double> poincare_ratio(const ProbeFunctionals& p) { return p.l2_perp / p.s; }

std::optional<double> regularization_ratio(const ProbeFunctionals& p) {
  const double num = p.hdot - p.l2;
  if (num <= 0.0) return std::nullopt;
  return num / p.s;
}

std::optional<double> combined_ratio(const ProbeFunctionals& p) { return (p.l2_perp + p.hdot_perp) / p.s; }

Estimate interpolation(const Tabulated& t, double eps, double C_F, double floor) {
  if (!(eps > 0.0)) throw ValidationError("interp_check: eps must be positive");
  Estimate e;
  for (std::size_t k = 0; k < t.plain.size(); ++k) {
    for (bool mass : {false, true}) {
      const auto& fn = mass ? t.with_mass[k] : t.plain[k];
      const double den = fn.s + fn.l2_proj;
      if (!(den > floor * fn.l2)) {
        ++e.skipped;
        continue;
      }
      ++e.used;
      const double r = std::max(0.0, fn.grad - eps * C_F * fn.s_grad) / den;
      if (r > e.value) {
        e.value = r;
        e.argmax = t.labels[k] + (mass ? "+mu" : "");
      }
    }
  }
  if (e.used == 0) throw NumericalError("interp_check: every probe was degenerate");
  return e;
}

}  // namespace

const char* probe_kind_name(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::hermite: return "hermite";
    case ProbeKind::shifted_equilibrium: return "shifted_equilibrium";
    case ProbeKind::equilibrium_gradient: return "equilibrium_gradient";
    case ProbeKind::gaussian_packet: return "gaussian_packet";
  }
  return "unknown";
}

std::string ProbeFamily::descriptor() const {
  std::ostringstream os;
  os << "nested family size=" << size << " seed=" << seed
     << " kinds=[hermite x mu, shifted mu, grad mu, gaussian packet x mu], mean-free, unit L2(1/mu)";
  return os.str();
}

ProbeFamily make_probe_family(const FormContext& ctx, std::size_t size, std::uint64_t seed) {
  if (size == 0) throw ValidationError("probe family size must be positive");
  ProbeFamily fam;
  fam.size = size;
  fam.seed = seed;
  fam.members.reserve(size);
  for (std::size_t k = 0; k < size; ++k) fam.members.push_back(make_member(ctx, k, seed));
  return fam;
}

ProbeFunctionals probe_functionals(const FormContext& ctx, const VelocityField& f) {
  ProbeFunctionals r;
  const auto& mu = ctx.mu();
  const std::size_t n = f.size();
  r.s = ctx.s_form(f, f);
  r.l2 = ctx.norm2(f.values());
  const auto proj = ctx.project(f);
  const auto perp = f - proj;
  r.l2_proj = ctx.norm2(proj.values());
  r.l2_perp = ctx.norm2(perp.values());
  std::vector<double> u(n), up(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 1.0 / std::sqrt(mu[i]);
    u[i] = f[i] * w;
    up[i] = perp[i] * w;
  }
  r.hdot = h_alpha_half_symbol(ctx.grid(), ctx.alpha(), u);
  r.hdot_perp = h_alpha_half_symbol(ctx.grid(), ctx.alpha(), up);
  const auto df = ctx.derivative(f.values());
  r.grad = ctx.norm2(df);
  r.s_grad = ctx.s_form(std::span<const double>(df), std::span<const double>(df));
  return r;
}

Estimate estimate_poincare(const FormContext& ctx, const ProbeFamily& family, double floor) {
  return maximize(tabulate(ctx, family, false), floor, poincare_ratio);
}

Estimate estimate_regularization(const FormContext& ctx, const ProbeFamily& family, double floor) {
  return maximize(tabulate(ctx, family, false), floor, regularization_ratio);
}

Estimate estimate_combined_coercivity(const FormContext& ctx, const ProbeFamily& family, double floor) {
  return maximize(tabulate(ctx, family, false), floor, combined_ratio);
}

Estimate interp_check(const FormContext& ctx, const ProbeFamily& family, double eps, double C_F, double floor) {
  return interpolation(tabulate(ctx, family, true), eps, C_F, floor);
}

double ConstantsReport::K(double eps) const {
  for (const auto& [e, est] : interpolation) {
    if (e == eps) return est.value;
  }
  throw ValidationError("ConstantsReport: no K stored for the requested eps");
}

ConstantsReport estimate_constants(const FormContext& ctx, const ConstantsOptions& opts) {
  const auto family = make_probe_family(ctx, opts.family_size, opts.seed);
  ConstantsReport r;
  r.family = family.descriptor();
  const auto table = tabulate(ctx, family, true);
  r.poincare = maximize(table, opts.degenerate_floor, poincare_ratio);
  r.regularization = maximize(table, opts.degenerate_floor, regularization_ratio);
  r.combined = maximize(table, opts.degenerate_floor, combined_ratio);
  auto eps = opts.eps;
  if (eps.empty()) throw ValidationError("constants: at least one eps is required");
  std::sort(eps.begin(), eps.end());
  for (double e : eps) r.interpolation.emplace_back(e, interpolation(table, e, r.C_F(), opts.degenerate_floor));
  return r;
}

}  // namespace levykin
