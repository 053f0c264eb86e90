#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "levykin/errors.hpp"
#include "levykin/snapshot_io.hpp"

using namespace levykin;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("levykin-test-" + name + "-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  return dir;
}

PhaseField noise(const GridPtr& grid, std::size_t m, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(m * grid->size());
  for (double& x : v) x = u(rng);
  return PhaseField(m, grid, std::move(v));
}

}  // namespace

TEST_CASE("frame round trip is bit exact") {
  const auto dir = scratch_dir("frame");
  const auto grid = std::make_shared<const VelocityGrid>(8.0, 64);
  const auto f = noise(grid, 6, 1);
  write_snapshot_frame(dir / "a.bin", 1.25, f);
  const auto [t, g] = read_snapshot_frame(dir / "a.bin", grid, 6);
  CHECK(t == 1.25);
  for (std::size_t i = 0; i < f.values().size(); ++i) REQUIRE(g.values()[i] == f.values()[i]);
  CHECK_THROWS_AS(read_snapshot_frame(dir / "a.bin", grid, 8), ValidationError);
  CHECK_THROWS_AS(read_snapshot_frame(dir / "missing.bin", grid, 6), IoError);
  {
    std::ofstream bad(dir / "bad.bin", std::ios::binary);
    bad << "NOTASNAP and some bytes";
  }
  CHECK_THROWS_AS(read_snapshot_frame(dir / "bad.bin", grid, 6), IoError);
  fs::resize_file(dir / "a.bin", fs::file_size(dir / "a.bin") - 8);
  CHECK_THROWS_AS(read_snapshot_frame(dir / "a.bin", grid, 6), IoError);
  fs::remove_all(dir);
}

TEST_CASE("writer and manifest") {
  const auto dir = scratch_dir("writer");
  const auto grid = std::make_shared<const VelocityGrid>(8.0, 64);
  SnapshotManifest man;
  man.alpha = 1.5;
  man.extent = 8.0;
  man.v_nodes = 64;
  man.x_nodes = 4;
  man.coeffs = HypoCoeffs::make(9.0, 0.3, 1.0, 0.1);
  man.prefactors = DissipationPrefactors{0.1, 0.2, 0.3, 0.4};
  man.lambda_cert = 0.01;
  man.config_hash = "0123456789abcdef";
  SnapshotWriter w(dir, man);
  for (int i = 0; i < 3; ++i) w.add(0.05 * i, noise(grid, 4, static_cast<unsigned>(i)));
  w.finish();

  const auto back = read_snapshot_manifest(dir);
  CHECK(back.alpha == 1.5);
  CHECK(back.v_nodes == 64);
  CHECK(back.x_nodes == 4);
  CHECK(back.coeffs == man.coeffs);
  REQUIRE(back.prefactors);
  CHECK(back.prefactors->s_dv == 0.3);
  CHECK(back.lambda_cert == 0.01);
  CHECK(back.config_hash == man.config_hash);
  REQUIRE(back.frames.size() == 3);
  const auto snaps = read_snapshots(dir, back, grid);
  REQUIRE(snaps.size() == 3);
  CHECK(snaps[2].first == doctest::Approx(0.1));
  CHECK(snaps[1].second.values()[17] == noise(grid, 4, 1).values()[17]);
  fs::remove_all(dir);
}

TEST_CASE("manifest errors") {
  const auto dir = scratch_dir("manifest");
  CHECK_THROWS_AS(read_snapshot_manifest(dir), IoError);
  {
    std::ofstream f(dir / "manifest.json");
    f << R"({"format": "levykin-snapshots", "version": 99})";
  }
  CHECK_THROWS_AS(read_snapshot_manifest(dir), IoError);
  fs::remove_all(dir);
}
