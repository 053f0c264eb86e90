#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "experiment.hpp"
#include "levykin/equilibrium.hpp"
#include "levykin/errors.hpp"

using namespace levykin;
using namespace levykin::app;
namespace fs = std::filesystem;

namespace {

SimConfig short_lfp() {
  SimConfig c = preset("lfp-default");
  c.x_modes = 16;
  c.t_end = 1.5;
  c.fit_from = 0.2;
  c.probe_family_size = 16;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("initial data presets") {
  SimConfig c;
  c.x_modes = 8;
  const auto grid = make_grid(c);
  const auto mu = periodized_equilibrium(1.0, grid);
  for (std::string name : {"perturbed-cos", "two-mode", "homogeneous", "equilibrium"}) {
    CAPTURE(name);
    c.init = name;
    const auto f = make_initial(c, mu);
    CHECK(f.x_nodes() == 8);
    // The node at -V has no mirror image, so odd perturbations keep a
    // mass of order V mu(V) h.
    CHECK(f.mass() == doctest::Approx(2.0 * std::numbers::pi).epsilon(name == "homogeneous" ? 1e-5 : 1e-12));
  }
  c.init = "no-such-preset";
  CHECK_THROWS_AS(make_initial(c, mu), ValidationError);
}

TEST_CASE("initial data and profiles from files") {
  const auto dir = fs::temp_directory_path() / "levykin-experiment-files";
  fs::create_directories(dir);
  SimConfig c;
  c.extent = 4.0;
  c.nodes = 16;
  c.x_modes = 4;
  c.model = "bgk";
  const auto grid = std::make_shared<const VelocityGrid>(c.extent, c.nodes);
  {
    std::ofstream f(dir / "init.csv");
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 16; ++j) f << (j ? "," : "") << 0.01 * static_cast<double>(i + j);
      f << '\n';
    }
    std::ofstream p(dir / "M.csv");
    p << "v,M\n";
    for (std::size_t j = 0; j < 16; ++j) p << grid->node(j) << ',' << 1.0 / (std::numbers::pi * (1.0 + grid->node(j) * grid->node(j))) << '\n';
    std::ofstream q(dir / "M_bad.csv");
    q << "0.5,1\n";
  }
  c.init = (dir / "init.csv").string();
  const auto f = make_initial(c, VelocityField(grid));
  CHECK(f.at(2, 3) == doctest::Approx(0.05));
  const auto M = read_profile_csv(dir / "M.csv", grid);
  CHECK(M[8] == doctest::Approx(1.0 / std::numbers::pi));
  CHECK_THROWS_AS(read_profile_csv(dir / "M_bad.csv", grid), ValidationError);
  c.x_modes = 6;
  CHECK_THROWS_AS(make_initial(c, VelocityField(grid)), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("trace CSV round trip") {
  SimTrace tr;
  for (int i = 0; i < 5; ++i) {
    tr.times.push_back(0.1 * i);
    tr.mass.push_back(1.0);
    tr.triple_norm.push_back(std::exp(-0.1 * i) / 3.0);
    tr.h1_norm.push_back(0.5);
    tr.l2_norm.push_back(0.25);
    tr.fitted_lambda_running.push_back(i < 3 ? std::nan("") : 1.0);
  }
  const auto path = fs::temp_directory_path() / "levykin-trace-roundtrip.csv";
  write_trace_csv(path, tr, "abc");
  const auto text = slurp(path);
  CHECK(text.rfind("# levykin-trace v1\n# config_hash: abc\n", 0) == 0);
  const auto [t, y] = read_trace_csv(path);
  CHECK(t == tr.times);
  CHECK(y == tr.triple_norm);
  const auto [t2, lam] = read_trace_csv(path, "fitted_lambda_running");
  CHECK(std::isnan(lam[0]));
  CHECK_THROWS_AS(read_trace_csv(path, "nope"), ValidationError);
  fs::remove(path);
}

TEST_CASE("monotonicity breaches") {
  CHECK(monotonicity_breaches({3.0, 2.0, 2.0, 1.0}) == 0);
  CHECK(monotonicity_breaches({3.0, 2.0, 2.1, 1.0, 1.5}) == 2);
  CHECK(monotonicity_breaches({1.0, 1.0 + 1e-12}) == 0);
}

TEST_CASE("automatic coefficients run constants then the recipe") {
  const auto cfg = short_lfp();
  const auto run = run_lfp(cfg);
  REQUIRE(run.constants);
  REQUIRE(run.recipe);
  const auto manual = coefficient_search(run_constants(cfg));
  CHECK(manual.coeffs == run.coeffs);
  CHECK(run.lambda_cert == manual.lambda_cert);
  CHECK(run.breaches == 0);
  CHECK(run.fit.lambda > 0.0);
  CHECK(run.sim.trace.max_relative_mass_drift() < 1e-10);
}

TEST_CASE("explicit coefficients skip the constants") {
  auto cfg = short_lfp();
  cfg.coeffs = HypoCoeffs::make(9.0, 0.35, 1.0, 0.1);
  const auto run = run_lfp(cfg);
  CHECK_FALSE(run.constants);
  CHECK(run.coeffs == *cfg.coeffs);
  cfg.equilibrium = "cauchy";
  CHECK_THROWS_AS(run_lfp(cfg), ValidationError);
}

TEST_CASE("BGK preset is deterministic and decays") {
  auto cfg = preset("bgk-default");
  cfg.t_end = 3.0;
  const auto a = run_bgk(cfg);
  const auto b = run_bgk(cfg);
  const auto dir = fs::temp_directory_path();
  write_trace_csv(dir / "levykin-bgk-a.csv", a.sim.trace, config_hash(cfg));
  write_trace_csv(dir / "levykin-bgk-b.csv", b.sim.trace, config_hash(cfg));
  CHECK(slurp(dir / "levykin-bgk-a.csv") == slurp(dir / "levykin-bgk-b.csv"));
  CHECK(a.breaches == 0);
  CHECK(a.fit.lambda > 0.0);
  fs::remove(dir / "levykin-bgk-a.csv");
  fs::remove(dir / "levykin-bgk-b.csv");
}
