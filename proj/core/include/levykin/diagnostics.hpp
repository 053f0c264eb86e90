#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levykin/coeffs.hpp"
#include "levykin/forms.hpp"
#include "levykin/phase_field.hpp"
#include "levykin/probes.hpp"
#include "levykin/solver_lfp.hpp"

namespace levykin {

/// The four factors multiplying S(f,f), S(d_x f, d_x f), S(d_v f, d_v f)
/// and ||d_x f||^2 in the dissipation functional.
struct DissipationPrefactors {
  double s = 0.0;
  double s_dx = 0.0;
  double s_dv = 0.0;
  double dx = 0.0;

  [[nodiscard]] bool all_positive() const { return s > 0.0 && s_dx > 0.0 && s_dv > 0.0 && dx > 0.0; }
};

/// Constants entering the recipe, taken from a ConstantsReport.
struct RecipeConstants {
  double C_P = 0.0;
  double C_F = 0.0;
  double torus_poincare = 1.0;
  std::vector<std::pair<double, double>> K;  // eps -> K(eps)

  static RecipeConstants from(const ConstantsReport& report);
};

DissipationPrefactors dissipation_prefactors(const HypoCoeffs& c, const RecipeConstants& k, double K_eps);

/// Rate lambda with D(f,f) >= lambda |||f|||^2, obtained from the Poincare
/// bounds ||f||^2 <= C_P S + C~_P ||d_x f||^2, the interpolation inequality
/// ||d_v f||^2 <= eps C_F S(d_v f) + K (S + ||Pi f||^2) and
/// 2c <d_x f, d_v f> <= (c^2/b) ||d_x f||^2 + b ||d_v f||^2. Zero when any
/// prefactor is non-positive.
double certified_rate(const HypoCoeffs& c, const RecipeConstants& k, double K_eps);

struct RecipeResult {
  bool feasible = false;
  std::string binding;  // violated constraint when infeasible
  HypoCoeffs coeffs;
  double K = 0.0;
  DissipationPrefactors prefactors;
  double lambda_cert = 0.0;
};

/// Chooses eps, b, c, a in turn: the largest stored eps with
/// margin * eps < 1/(4 C_F), b = 1/(2K)/margin, c = margin * 2 b C~_P K,
/// a = margin * (c^2 (2 + C_P/2)/b + b C_P/2).
RecipeResult coefficient_search(const ConstantsReport& report, double margin = 1.1);
RecipeResult coefficient_search(const RecipeConstants& k, double margin = 1.1);

/// Names of recipe inequalities that user-supplied coefficients violate.
std::vector<std::string> recipe_violations(const HypoCoeffs& c, const RecipeConstants& k);

struct DecayFit {
  double lambda = 0.0;
  double prefactor = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  double residual = 0.0;
  std::size_t samples = 0;
  std::optional<std::string> notice;  // set when the window was truncated
};

/// Least-squares fit of log(norm) against t on [t0, t1]. Samples past the
/// first one at or below `floor` x max(norm) are dropped with a notice.
DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& norm,
                   std::optional<std::pair<double, double>> window = std::nullopt, double floor = 1e-13);
DecayFit decay_fit(const SimTrace& trace, std::optional<std::pair<double, double>> window = std::nullopt);

/// S-type pieces of D(f,f) for a deviation field, summed over x-modes.
struct DissipationTerms {
  double s = 0.0;     // S_{x,v}(f, f)
  double s_dx = 0.0;  // S_{x,v}(d_x f, d_x f)
  double s_dv = 0.0;  // S_{x,v}(d_v f, d_v f)
  double dx = 0.0;    // ||d_x f||^2

  [[nodiscard]] double value(const DissipationPrefactors& p) const {
    return p.s * s + p.s_dx * s_dx + p.s_dv * s_dv + p.dx * dx;
  }
};
DissipationTerms dissipation_terms(const ModeSet& deviation, const FormContext& ctx);

struct DissipationSample {
  double t = 0.0;
  double ddt_half_norm2 = 0.0;  // centered difference of |||f|||^2 / 2
  double dissipation = 0.0;     // D(f, f)
  double norm2 = 0.0;           // |||f|||^2
  bool inequality_ok = true;    // ddt + D <= tol * norm2
  bool rate_ok = true;          // D >= lambda_cert * norm2
};

struct DissipationReport {
  std::vector<DissipationSample> samples;
  double tolerance = 1e-3;
  double lambda_cert = 0.0;
  [[nodiscard]] bool inequality_holds() const;
  [[nodiscard]] bool rate_holds() const;
  [[nodiscard]] std::vector<double> failing_times() const;
};

struct DissipationOptions {
  double tolerance = 1e-3;
  double max_spacing = 0.05;
  /// Relative slack on D >= lambda_cert |||f|||^2 (discretization noise).
  double rate_slack = 1e-6;
};

/// Checks d/dt (|||f|||^2/2) + D(f,f) <= tol |||f|||^2 at interior snapshots
/// by centered differences, and D(f,f) >= lambda_cert |||f|||^2.
DissipationReport dissipation_check(const std::vector<std::pair<double, PhaseField>>& snapshots,
                                    const HypoCoeffs& coeffs, const DissipationPrefactors& prefactors,
                                    double lambda_cert, const FormContext& ctx, const DissipationOptions& opts = {});

}  // namespace levykin
