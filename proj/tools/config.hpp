#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "levykin/coeffs.hpp"

namespace levykin::app {

/// Effective configuration of one experiment. Every field is concrete after
/// loading, so saving and reloading reproduces it exactly.
struct SimConfig {
  std::string model = "lfp";  // "lfp" or "bgk"
  double alpha = 1.0;
  int dim = 1;
  double extent = 64.0;
  std::size_t nodes = 2048;
  std::size_t x_modes = 64;
  double dt = 0.05;
  double t_end = 10.0;
  std::size_t sample_every = 1;
  double fit_from = 1.0;
  std::optional<HypoCoeffs> coeffs;  // nullopt = "auto"
  std::string init = "perturbed-cos";
  std::string equilibrium = "stable";
  std::vector<double> eps = {0.05, 0.1, 0.2};
  std::size_t probe_family_size = 64;
  std::string output_dir = "levykin-out";
  bool snapshots = false;
  std::size_t snapshot_every = 1;
  std::uint64_t seed = 1;
  int threads = 1;

  bool operator==(const SimConfig&) const = default;
};

/// Smallest even node count (doubling from 32 nodes per unit of extent)
/// with e^{-xi_max^alpha/alpha} < 1e-12 at the top dual mode.
std::size_t default_nodes(double alpha, double extent);

/// Names accepted by `preset()`.
std::vector<std::string> preset_names();
SimConfig preset(const std::string& name);

/// Parses JSON text; `source` names the input in error messages. Missing
/// keys keep their defaults (the velocity node count defaults to the
/// resolution rule for alpha); unknown keys are rejected.
SimConfig parse_config(const std::string& text, const std::string& source = "<config>");
SimConfig load_config(const std::filesystem::path& path);
std::string dump_config(const SimConfig& cfg);
void save_config(const SimConfig& cfg, const std::filesystem::path& path);

/// Checks every field against the preconditions of the modules it feeds.
void validate(const SimConfig& cfg);

/// FNV-1a 64-bit hash of the canonical dump, as 16 hex digits. The thread
/// count and output directory do not enter the hash.
std::string config_hash(const SimConfig& cfg);

}  // namespace levykin::app
