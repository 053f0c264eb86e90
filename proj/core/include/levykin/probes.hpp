#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levykin/forms.hpp"

namespace levykin {

enum class ProbeKind { hermite, shifted_equilibrium, equilibrium_gradient, gaussian_packet };
const char* probe_kind_name(ProbeKind kind);

struct Probe {
  ProbeKind kind;
  std::string label;
  VelocityField field;  // mean-free, unit L^2(mu^{-1}) norm
};

/// Nested, seeded family of perturbations of the form (bounded) * mu.
///
/// Member k depends only on (k, seed), so the family of size 2N starts with
/// the family of size N. Members cycle through Hermite functions, shifted
/// equilibria, the equilibrium gradient (once, then random packets) and
/// random Gaussian wave packets; every member has its mass removed and is
/// normalized in L^2(mu^{-1}).
struct ProbeFamily {
  std::size_t size = 0;
  std::uint64_t seed = 0;
  std::vector<Probe> members;

  [[nodiscard]] std::string descriptor() const;
};

ProbeFamily make_probe_family(const FormContext& ctx, std::size_t size, std::uint64_t seed);

struct Estimate {
  double value = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;  // degenerate (S below floor) or trivially satisfied
  std::string argmax;       // label of the maximizing probe
};

struct ConstantsOptions {
  std::vector<double> eps{0.05, 0.1, 0.2};
  std::size_t family_size = 64;
  std::uint64_t seed = 1;
  /// Probes with S(f,f) <= floor * ||f||^2 are treated as nullspace directions.
  double degenerate_floor = 1e-10;
};

struct ConstantsReport {
  Estimate poincare;            // C_P
  Estimate regularization;      // C_R
  Estimate combined;            // C_F
  std::vector<std::pair<double, Estimate>> interpolation;  // eps -> K(eps)
  double torus_poincare = 1.0;  // C~_P of the 2 pi torus (first nonzero mode)
  std::optional<double> C_M;    // BGK constant, when an M is attached
  std::string family;           // descriptor of the probe family

  [[nodiscard]] double C_P() const { return poincare.value; }
  [[nodiscard]] double C_R() const { return regularization.value; }
  [[nodiscard]] double C_F() const { return combined.value; }
  /// K at exactly the stored eps (throws if absent).
  [[nodiscard]] double K(double eps) const;
};

/// Per-probe functionals shared by the estimators.
struct ProbeFunctionals {
  double s = 0.0;           // S(f, f)
  double l2 = 0.0;          // ||f||^2_{mu^{-1}}
  double l2_perp = 0.0;     // ||f - Pi f||^2
  double l2_proj = 0.0;     // ||Pi f||^2
  double hdot = 0.0;        // ||f mu^{-1/2}||^2_{Hdot^{alpha/2}}
  double hdot_perp = 0.0;   // same for f - Pi f
  double grad = 0.0;        // ||df/dv||^2
  double s_grad = 0.0;      // S(df/dv, df/dv)
};
ProbeFunctionals probe_functionals(const FormContext& ctx, const VelocityField& f);

Estimate estimate_poincare(const FormContext& ctx, const ProbeFamily& family, double floor = 1e-10);
Estimate estimate_regularization(const FormContext& ctx, const ProbeFamily& family, double floor = 1e-10);
Estimate estimate_combined_coercivity(const FormContext& ctx, const ProbeFamily& family, double floor = 1e-10);
/// Smallest K with ||f'||^2 <= K (S(f,f) + ||Pi f||^2) + eps C_F S(f',f') over
/// the family and its mass-carrying variants f + mu.
Estimate interp_check(const FormContext& ctx, const ProbeFamily& family, double eps, double C_F, double floor = 1e-10);

ConstantsReport estimate_constants(const FormContext& ctx, const ConstantsOptions& opts);

}  // namespace levykin
