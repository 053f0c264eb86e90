#include "levykin/snapshot_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "levykin/errors.hpp"

namespace levykin {
namespace {

static_assert(std::endian::native == std::endian::little, "snapshot files are little endian");

constexpr std::array<char, 8> kMagic = {'L', 'V', 'K', 'S', 'N', 'A', 'P', '1'};

template <class T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::filesystem::path& file) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) throw IoError("truncated snapshot file " + file.string());
  return value;
}

nlohmann::json to_json(const SnapshotManifest& m) {
  nlohmann::json j;
  j["format"] = "levykin-snapshots";
  j["version"] = kSnapshotVersion;
  j["model"] = m.model;
  j["alpha"] = m.alpha;
  j["velocity"] = {{"extent", m.extent}, {"nodes", m.v_nodes}};
  j["x_nodes"] = m.x_nodes;
  j["coeffs"] = {{"a", m.coeffs.a}, {"b", m.coeffs.b}, {"c", m.coeffs.c}, {"eps", m.coeffs.eps}};
  if (m.prefactors) {
    const auto& p = *m.prefactors;
    j["prefactors"] = {{"s", p.s}, {"s_dx", p.s_dx}, {"s_dv", p.s_dv}, {"dx", p.dx}};
  }
  j["lambda_cert"] = m.lambda_cert;
  j["config_hash"] = m.config_hash;
  j["frames"] = nlohmann::json::array();
  for (const auto& [t, file] : m.frames) j["frames"].push_back({{"t", t}, {"file", file}});
  return j;
}

}  // namespace

void write_snapshot_frame(const std::filesystem::path& file, double t, const PhaseField& f) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + file.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.x_nodes()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid().size()));
  put<double>(out, t);
  const auto v = f.values();
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!out) throw IoError("failed writing " + file.string());
}

std::pair<double, PhaseField> read_snapshot_frame(const std::filesystem::path& file, GridPtr grid,
                                                  std::size_t x_nodes) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot " + file.string());
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw IoError("bad snapshot header in " + file.string());
  const auto m = get<std::uint32_t>(in, file);
  const auto n = get<std::uint32_t>(in, file);
  const auto t = get<double>(in, file);
  if (m != x_nodes || n != grid->size()) {
    throw ValidationError("snapshot " + file.string() + " has shape " + std::to_string(m) + "x" + std::to_string(n) +
                          ", expected " + std::to_string(x_nodes) + "x" + std::to_string(grid->size()));
  }
  std::vector<double> values(static_cast<std::size_t>(m) * n);
  if (!in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)))) {
    throw IoError("truncated snapshot file " + file.string());
  }
  return {t, PhaseField(x_nodes, std::move(grid), std::move(values))};
}

SnapshotWriter::SnapshotWriter(std::filesystem::path dir, SnapshotManifest manifest)
    : dir_(std::move(dir)), manifest_(std::move(manifest)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create snapshot directory " + dir_.string() + ": " + ec.message());
  manifest_.frames.clear();
}

void SnapshotWriter::add(double t, const PhaseField& f) {
  char name[32];
  std::snprintf(name, sizeof name, "snap_%06zu.bin", manifest_.frames.size());
  write_snapshot_frame(dir_ / name, t, f);
  manifest_.frames.emplace_back(t, name);
}

void SnapshotWriter::finish() {
  std::ofstream out(dir_ / "manifest.json", std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir_ / "manifest.json").string());
  out << to_json(manifest_).dump(2) << '\n';
  if (!out) throw IoError("failed writing " + (dir_ / "manifest.json").string());
}

SnapshotManifest read_snapshot_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "levykin-snapshots") throw IoError(path.string() + ": unknown format");
    if (j.at("version").get<int>() != kSnapshotVersion) {
      throw IoError(path.string() + ": unsupported version " + j.at("version").dump());
    }
    SnapshotManifest m;
    m.model = j.at("model").get<std::string>();
    m.alpha = j.at("alpha").get<double>();
    m.extent = j.at("velocity").at("extent").get<double>();
    m.v_nodes = j.at("velocity").at("nodes").get<std::size_t>();
    m.x_nodes = j.at("x_nodes").get<std::size_t>();
    const auto& c = j.at("coeffs");
    m.coeffs = HypoCoeffs{c.at("a").get<double>(), c.at("b").get<double>(), c.at("c").get<double>(),
                          c.at("eps").get<double>()};
    if (j.contains("prefactors")) {
      const auto& p = j["prefactors"];
      m.prefactors = DissipationPrefactors{p.at("s").get<double>(), p.at("s_dx").get<double>(),
                                           p.at("s_dv").get<double>(), p.at("dx").get<double>()};
    }
    m.lambda_cert = j.value("lambda_cert", 0.0);
    m.config_hash = j.value("config_hash", std::string{});
    for (const auto& fr : j.at("frames")) m.frames.emplace_back(fr.at("t").get<double>(), fr.at("file").get<std::string>());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": malformed manifest: " + e.what());
  }
}

std::vector<std::pair<double, PhaseField>> read_snapshots(const std::filesystem::path& dir,
                                                          const SnapshotManifest& manifest, GridPtr grid) {
  std::vector<std::pair<double, PhaseField>> out;
  out.reserve(manifest.frames.size());
  for (const auto& [t, file] : manifest.frames) out.push_back(read_snapshot_frame(dir / file, grid, manifest.x_nodes));
  return out;
}

}  // namespace levykin
