#include "levykin/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "levykin/errors.hpp"
#include "levykin/numerics.hpp"

namespace levykin {

RecipeConstants RecipeConstants::from(const ConstantsReport& report) {
  RecipeConstants k;
  k.C_P = report.C_P();
  k.C_F = report.C_F();
  k.torus_poincare = report.torus_poincare;
  for (const auto& [eps, est] : report.interpolation) k.K.emplace_back(eps, est.value);
  return k;
}

DissipationPrefactors dissipation_prefactors(const HypoCoeffs& c, const RecipeConstants& k, double K_eps) {
  DissipationPrefactors p;
  p.s = 1.0 - 2.0 * c.b * K_eps;
  p.s_dx = c.a - c.c * c.c / c.b * (2.0 + k.C_P / 2.0) - c.b * k.C_P / 2.0;
  p.s_dv = c.b / 2.0 - 2.0 * c.b * c.eps * k.C_F;
  p.dx = c.c - 2.0 * c.b * k.torus_poincare * K_eps;
  return p;
}

double certified_rate(const HypoCoeffs& c, const RecipeConstants& k, double K_eps) {
  const auto p = dissipation_prefactors(c, k, K_eps);
  if (!p.all_positive()) return 0.0;
  const double on_s = p.s / (k.C_P + 2.0 * c.b * K_eps);
  const double on_dx = p.dx / (k.torus_poincare + c.a + c.c * c.c / c.b + 2.0 * c.b * K_eps * k.torus_poincare);
  const double on_dv = c.eps > 0.0 && k.C_F > 0.0 ? p.s_dv / (2.0 * c.b * c.eps * k.C_F)
                                                  : std::numeric_limits<double>::infinity();
  return std::min({on_s, on_dx, on_dv});
}

RecipeResult coefficient_search(const ConstantsReport& report, double margin) {
  return coefficient_search(RecipeConstants::from(report), margin);
}

RecipeResult coefficient_search(const RecipeConstants& k, double margin) {
  if (!(margin > 1.0)) throw ValidationError("coefficient_search: margin must exceed 1");
  RecipeResult r;
  if (!(k.C_P > 0.0) || !std::isfinite(k.C_P)) {
    r.binding = "C_P must be positive and finite";
    return r;
  }
  if (!(k.C_F > 0.0) || !std::isfinite(k.C_F)) {
    r.binding = "C_F must be positive and finite";
    return r;
  }
  if (!(k.torus_poincare > 0.0)) {
    r.binding = "torus Poincare constant must be positive";
    return r;
  }
  const double eps_max = 1.0 / (4.0 * k.C_F);
  std::optional<std::pair<double, double>> pick;
  for (const auto& [eps, K] : k.K) {
    if (eps > 0.0 && margin * eps < eps_max && (!pick || eps > pick->first)) pick.emplace(eps, K);
  }
  if (!pick) {
    r.binding = "eps < 1/(4 C_F) = " + std::to_string(eps_max) + ": no stored eps is small enough";
    return r;
  }
  const auto [eps, K] = *pick;
  if (!(K > 0.0) || !std::isfinite(K)) {
    r.binding = "b < 1/(2 K(eps)): K(" + std::to_string(eps) + ") = " + std::to_string(K) + " is not positive";
    return r;
  }
  const double b = 1.0 / (2.0 * K) / margin;
  const double c = margin * 2.0 * b * k.torus_poincare * K;
  const double a = margin * (c * c * (2.0 + k.C_P / 2.0) / b + b * k.C_P / 2.0);
  if (!(c * c < a * b)) {
    r.binding = "c^2 < ab";
    return r;
  }
  r.coeffs = HypoCoeffs::make(a, b, c, eps);
  r.K = K;
  r.prefactors = dissipation_prefactors(r.coeffs, k, K);
  if (!r.prefactors.all_positive()) {
    r.binding = "dissipation prefactors not all positive";
    return r;
  }
  r.lambda_cert = certified_rate(r.coeffs, k, K);
  r.feasible = true;
  return r;
}

std::vector<std::string> recipe_violations(const HypoCoeffs& c, const RecipeConstants& k) {
  std::vector<std::string> out;
  if (!(c.c * c.c < c.a * c.b)) out.emplace_back("c^2 < ab");
  if (!(c.eps > 0.0 && c.eps < 1.0 / (4.0 * k.C_F))) out.emplace_back("0 < eps < 1/(4 C_F)");
  const auto it = std::find_if(k.K.begin(), k.K.end(), [&](const auto& e) { return e.first == c.eps; });
  if (it == k.K.end()) {
    out.emplace_back("K(eps) unavailable for eps = " + std::to_string(c.eps));
    return out;
  }
  const double K = it->second;
  if (!(c.b < 1.0 / (2.0 * K))) out.emplace_back("b < 1/(2 K(eps))");
  if (!(c.c > 2.0 * c.b * k.torus_poincare * K)) out.emplace_back("c > 2 b C~_P K(eps)");
  if (!(c.a > c.c * c.c * (2.0 + k.C_P / 2.0) / c.b + c.b * k.C_P / 2.0)) {
    out.emplace_back("a > c^2 (2 + C_P/2)/b + b C_P/2");
  }
  return out;
}

DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& norm,
                   std::optional<std::pair<double, double>> window, double floor) {
  if (t.size() != norm.size()) throw ValidationError("decay_fit: time and norm columns differ in length");
  if (t.empty()) throw ValidationError("decay_fit: empty trace");
  double t0 = window ? window->first : t.front();
  double t1 = window ? window->second : t.back();
  if (!(t1 > t0)) throw ValidationError("decay_fit: window must satisfy t0 < t1");

  double peak = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= t0 && t[i] <= t1 && std::isfinite(norm[i])) peak = std::max(peak, norm[i]);
  }
  DecayFit fit;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    if (!std::isfinite(norm[i])) throw NumericalError("decay_fit: non-finite norm at t = " + std::to_string(t[i]));
    if (!(norm[i] > floor * peak)) {
      fit.notice = "window truncated at t = " + std::to_string(t[i]) + ": norm reached the equilibrium floor";
      t1 = x.empty() ? t0 : x.back();
      break;
    }
    x.push_back(t[i]);
    y.push_back(std::log(norm[i]));
  }
  if (x.size() < 10) {
    throw ValidationError("decay_fit: need at least 10 samples in the window, found " + std::to_string(x.size()));
  }
  const auto line = numerics::fit_line(x, y);
  fit.lambda = -line.slope;
  fit.prefactor = std::exp(line.intercept);
  fit.t0 = x.front();
  fit.t1 = x.back();
  fit.residual = line.rms_residual;
  fit.samples = x.size();
  return fit;
}

DecayFit decay_fit(const SimTrace& trace, std::optional<std::pair<double, double>> window) {
  return decay_fit(trace.times, trace.triple_norm, window);
}

DissipationTerms dissipation_terms(const ModeSet& f, const FormContext& ctx) {
  DissipationTerms d;
  for (std::size_t k = 0; k < f.modes.size(); ++k) {
    if (f.empty_mode(k)) continue;
    const double w = 2.0 * std::numbers::pi * f.multiplicity(k);
    const double kk = (2 * k == f.x_nodes) ? 0.0 : static_cast<double>(k);
    const auto& fk = f.modes[k];
    const double s = ctx.s_form_complex(fk);
    d.s += w * s;
    d.s_dx += w * kk * kk * s;
    d.s_dv += w * ctx.s_form_complex(ctx.derivative(std::span<const cplx>(fk)));
    d.dx += w * kk * kk * ctx.norm2_complex(fk);
  }
  return d;
}

bool DissipationReport::inequality_holds() const {
  return std::all_of(samples.begin(), samples.end(), [](const auto& s) { return s.inequality_ok; });
}

bool DissipationReport::rate_holds() const {
  return std::all_of(samples.begin(), samples.end(), [](const auto& s) { return s.rate_ok; });
}

std::vector<double> DissipationReport::failing_times() const {
  std::vector<double> out;
  for (const auto& s : samples) {
    if (!s.inequality_ok || !s.rate_ok) out.push_back(s.t);
  }
  return out;
}

DissipationReport dissipation_check(const std::vector<std::pair<double, PhaseField>>& snapshots,
                                    const HypoCoeffs& coeffs, const DissipationPrefactors& prefactors,
                                    double lambda_cert, const FormContext& ctx, const DissipationOptions& opts) {
  if (snapshots.size() < 3) throw ValidationError("dissipation_check: need at least 3 snapshots");
  if (!coeffs.valid()) throw ValidationError("dissipation_check: coefficients violate c^2 < ab");
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    const double gap = snapshots[i].first - snapshots[i - 1].first;
    if (!(gap > 0.0)) throw ValidationError("dissipation_check: snapshot times must increase");
    if (gap > opts.max_spacing * (1.0 + 1e-9)) {
      throw ValidationError("dissipation_check: snapshot spacing " + std::to_string(gap) + " exceeds " +
                            std::to_string(opts.max_spacing));
    }
  }
  const std::size_t count = snapshots.size();
  std::vector<double> norm2(count), dis(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& f = snapshots[i].second;
    if (!(f.grid() == ctx.grid())) throw ValidationError("dissipation_check: snapshot grid differs from the weight");
    const auto dev = equilibrium_deviation(f.modes(), ctx);
    norm2[i] = phase_norms(dev, ctx).triple(coeffs);
    dis[i] = dissipation_terms(dev, ctx).value(prefactors);
  }
  DissipationReport rep;
  rep.tolerance = opts.tolerance;
  rep.lambda_cert = lambda_cert;
  for (std::size_t i = 1; i + 1 < count; ++i) {
    DissipationSample s;
    s.t = snapshots[i].first;
    s.ddt_half_norm2 = 0.5 * (norm2[i + 1] - norm2[i - 1]) / (snapshots[i + 1].first - snapshots[i - 1].first);
    s.dissipation = dis[i];
    s.norm2 = norm2[i];
    s.inequality_ok = s.ddt_half_norm2 + s.dissipation <= opts.tolerance * s.norm2;
    s.rate_ok = s.dissipation >= lambda_cert * s.norm2 * (1.0 - opts.rate_slack);
    rep.samples.push_back(s);
  }
  return rep;
}

}  // namespace levykin
