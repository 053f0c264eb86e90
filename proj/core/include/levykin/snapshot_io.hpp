#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levykin/coeffs.hpp"
#include "levykin/diagnostics.hpp"
#include "levykin/phase_field.hpp"

namespace levykin {

/// Snapshot directory layout:
///   manifest.json   {"format": "levykin-snapshots", "version": 1, ...}
///   snap_000000.bin "LVKSNAP1", uint32 x_nodes, uint32 v_nodes, double t,
///                   then x_nodes * v_nodes doubles (x-major), little endian.
struct SnapshotManifest {
  std::string model = "lfp";
  double alpha = 1.0;
  double extent = 0.0;
  std::size_t v_nodes = 0;
  std::size_t x_nodes = 0;
  HypoCoeffs coeffs;
  std::optional<DissipationPrefactors> prefactors;
  double lambda_cert = 0.0;
  std::string config_hash;
  std::vector<std::pair<double, std::string>> frames;  // (t, file name)
};

inline constexpr int kSnapshotVersion = 1;

void write_snapshot_frame(const std::filesystem::path& file, double t, const PhaseField& f);
/// Reads a frame onto `grid`; throws IoError on a malformed file and
/// ValidationError if its shape does not match.
std::pair<double, PhaseField> read_snapshot_frame(const std::filesystem::path& file, GridPtr grid,
                                                  std::size_t x_nodes);

/// Streams frames into a directory and writes the manifest on finish().
class SnapshotWriter {
 public:
  SnapshotWriter(std::filesystem::path dir, SnapshotManifest manifest);
  void add(double t, const PhaseField& f);
  void finish();
  [[nodiscard]] const SnapshotManifest& manifest() const { return manifest_; }

 private:
  std::filesystem::path dir_;
  SnapshotManifest manifest_;
};

SnapshotManifest read_snapshot_manifest(const std::filesystem::path& dir);
std::vector<std::pair<double, PhaseField>> read_snapshots(const std::filesystem::path& dir,
                                                          const SnapshotManifest& manifest, GridPtr grid);

}  // namespace levykin
