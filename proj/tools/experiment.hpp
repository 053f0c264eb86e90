#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"
#include "levykin/diagnostics.hpp"
#include "levykin/phase_field.hpp"
#include "levykin/probes.hpp"
#include "levykin/solver_bgk.hpp"
#include "levykin/solver_lfp.hpp"

namespace levykin::app {

GridPtr make_grid(const SimConfig& cfg);

/// Two-column CSV (v, M) whose v column must reproduce the grid nodes.
VelocityField read_profile_csv(const std::filesystem::path& path, const GridPtr& grid);

/// BGK equilibrium: "stable" (mu_alpha), "cauchy" or a CSV file.
VelocityField make_bgk_profile(const SimConfig& cfg, const GridPtr& grid);

/// Initial data from a preset applied to `profile`:
///   perturbed-cos  (1 + cos(x)/2) profile
///   two-mode       (1 + cos(x)/2 + sin(2x)/4) profile
///   homogeneous    (1 + v/(2(1 + v^2))) profile, x-independent
///   equilibrium    profile
/// or a CSV of x_modes rows with one value per velocity node.
PhaseField make_initial(const SimConfig& cfg, const VelocityField& profile);

/// Relative increases above `slack` between consecutive samples.
std::size_t monotonicity_breaches(const std::vector<double>& values, double slack = 1e-9);

struct LfpRun {
  SimResult sim;
  HypoCoeffs coeffs;
  std::optional<ConstantsReport> constants;
  std::optional<RecipeResult> recipe;
  std::optional<DissipationPrefactors> prefactors;
  double lambda_cert = 0.0;
  DecayFit fit;
  std::size_t breaches = 0;
};

/// Estimates constants and picks coefficients when cfg.coeffs is "auto"
/// (or when snapshots need the dissipation prefactors), then simulates.
LfpRun run_lfp(const SimConfig& cfg, const std::optional<std::filesystem::path>& snapshot_dir = std::nullopt);

struct BgkRun {
  SimResult sim;
  BgkEquilibrium eq;
  HypoCoeffs coeffs;
  DecayFit fit;
  std::size_t breaches = 0;
};
BgkRun run_bgk(const SimConfig& cfg);

/// Estimates constants for cfg.alpha on the configured grid.
ConstantsReport run_constants(const SimConfig& cfg);

nlohmann::json constants_json(const ConstantsReport& report);
nlohmann::json recipe_json(const RecipeResult& recipe);
nlohmann::json fit_json(const DecayFit& fit);

void write_trace_csv(const std::filesystem::path& path, const SimTrace& trace, const std::string& hash);
/// Reads the columns t and `column` of a trace CSV ('#' lines skipped).
std::pair<std::vector<double>, std::vector<double>> read_trace_csv(const std::filesystem::path& path,
                                                                   const std::string& column = "triple_norm");

/// Writes `j` (plus "config_hash" when non-empty) as pretty JSON.
void write_json(const std::filesystem::path& path, nlohmann::json j, const std::string& hash = "");

}  // namespace levykin::app
