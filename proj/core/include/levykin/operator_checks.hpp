#pragma once

#include <cstdint>
#include <vector>

#include "levykin/forms.hpp"
#include "levykin/fracops.hpp"
#include "levykin/grid.hpp"

namespace levykin {

/// Second derivatives of Gaussian wave packets exp(-(v-c)^2/(2 s^2))
/// cos(w v + phi), s in [1, 3], w in [0, 2], c in [-4, 4]. Zero mass and
/// first moment; spectra negligible well inside the dual band. Member k
/// depends only on (k, seed).
std::vector<VelocityField> band_limited_probes(const GridPtr& grid, std::size_t count, std::uint64_t seed);

/// Fourier-symbol vs quadrature fractional Laplacian, worst relative
/// L^2(|v| <= V/2) error over the probes, on grids with the same extent
/// and the given node counts. The periodic quadrature applies the same
/// operator as the Fourier path; the zero-extension quadrature applies the
/// whole-line operator, so its gap also contains the periodization effect.
struct CrossValidation {
  std::vector<std::size_t> nodes;
  std::vector<double> periodic;
  std::vector<double> zero_extension;
  /// Errors non-increasing along `nodes` once above `floor`.
  [[nodiscard]] bool converging(double floor = 1e-12) const;
};
CrossValidation cross_validate(double alpha, double extent, const std::vector<std::size_t>& nodes,
                               std::size_t probes = 20, std::uint64_t seed = 1);

/// ||L mu||_{L^2(mu^{-1})} by quadrature (equilibrium tail extension) at n
/// and 2n nodes.
struct Annihilation {
  std::size_t nodes = 0;
  double residual = 0.0;
  double residual_refined = 0.0;
};
Annihilation equilibrium_annihilation(double alpha, const VelocityGrid& grid);

struct StructureChecks {
  double max_mass_defect = 0.0;    // |int L g| / ||g||_{L^2}
  double min_energy = 0.0;         // min <(-Delta)^{a/2} g, g> / ||g||^2, both methods
  double max_scaling_error = 0.0;  // homogeneity under v -> 2v and v -> v/2
};
StructureChecks structure_checks(double alpha, const GridPtr& grid, std::size_t probes = 20, std::uint64_t seed = 1);

struct DecompositionChecks {
  std::size_t pairs = 0;
  double max_relative_residual = 0.0;
  double max_symmetry_defect = 0.0;      // |S(f,g) - S(g,f)|
  double max_skew_defect = 0.0;          // |A(f,g) + A(g,f)|
  double max_diagonal_skew = 0.0;        // |A(f,f)|
  double min_s_diagonal = 0.0;           // min S(f,f)
  double max_cauchy_schwarz_excess = 0.0;  // max |S(f,g)| / sqrt(S(f,f) S(g,g)) - 1
};
/// Evaluated on pairs (2i, 2i+1) of the shared probe family.
DecompositionChecks decomposition_checks(const FormContext& ctx, std::size_t pairs = 10, std::uint64_t seed = 1);

}  // namespace levykin
