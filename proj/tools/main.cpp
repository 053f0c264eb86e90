#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "experiment.hpp"
#include "json.hpp"
#include "levykin/equilibrium.hpp"
#include "levykin/errors.hpp"
#include "levykin/numerics.hpp"
#include "levykin/operator_checks.hpp"
#include "levykin/snapshot_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace levykin;
using namespace levykin::app;

namespace {

enum Exit { kOk = 0, kValidation = 2, kNumerical = 3, kIo = 4 };

// Output directory of the running command, for error.json.
std::optional<fs::path> g_error_dir;

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || *end != '\0') throw ValidationError(std::string(what) + ": not a number: '" + cell + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
  return out;
}

fs::path prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  g_error_dir = dir;
  return dir;
}

fs::path parent_or_cwd(const fs::path& file) {
  return file.has_parent_path() ? file.parent_path() : fs::path(".");
}

// Options shared by the two simulate commands. Flags override the config
// file or preset they are layered on.
struct RunFlags {
  std::string config_path;
  std::string preset_name;
  std::optional<double> alpha;
  std::optional<double> extent;
  std::optional<std::size_t> nodes;
  std::optional<std::size_t> modes;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<double> fit_from;
  std::string coeffs;
  std::string init;
  std::string equilibrium;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string out_dir;
  bool snapshots = false;
  std::optional<std::size_t> snapshot_every;

  void attach(CLI::App* cmd, bool bgk) {
    cmd->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", preset_name, "Start from a named preset (lfp-default, bgk-default)");
    cmd->add_option("--alpha", alpha, "Stability index in (0, 2)");
    cmd->add_option("--extent", extent, "Velocity box half-width V");
    cmd->add_option("--nodes", nodes, "Velocity nodes (default: resolution rule for alpha)");
    cmd->add_option("--modes", modes, "Torus grid points / Fourier modes in x");
    cmd->add_option("--dt", dt, "Time step");
    cmd->add_option("--tend", t_end, "Final time");
    cmd->add_option("--fit-from", fit_from, "Start of the decay-fit window");
    cmd->add_option("--coeffs", coeffs, "'auto' or a,b,c[,eps]");
    cmd->add_option("--init", init, "perturbed-cos | two-mode | homogeneous | equilibrium | CSV file");
    if (bgk) cmd->add_option("--equilibrium", equilibrium, "stable | cauchy | two-column CSV (v, M)");
    cmd->add_option("--seed", seed, "Seed of the probe family");
    cmd->add_option("--out", out, "Trace CSV (default <out-dir>/trace.csv)");
    cmd->add_option("--out-dir", out_dir, "Directory for JSON artifacts (default: directory of --out)");
    if (!bgk) {
      cmd->add_flag("--snapshots", snapshots, "Dump phase-space snapshots for dissipation-check");
      cmd->add_option("--snapshot-every", snapshot_every, "Snapshot stride in steps");
    }
  }

  SimConfig resolve(const std::string& model, int threads) const {
    SimConfig c = preset(model == "bgk" ? "bgk-default" : "lfp-default");
    if (!preset_name.empty()) c = preset(preset_name);
    if (!config_path.empty()) c = load_config(config_path);
    if (alpha) {
      c.alpha = *alpha;
      if (!nodes && !config_path.empty()) c.nodes = default_nodes(c.alpha, c.extent);
    }
    if (extent) c.extent = *extent;
    if (alpha || extent) c.nodes = default_nodes(c.alpha, c.extent);
    if (nodes) c.nodes = *nodes;
    if (modes) c.x_modes = *modes;
    if (dt) c.dt = *dt;
    if (t_end) c.t_end = *t_end;
    if (fit_from) c.fit_from = *fit_from;
    if (!coeffs.empty()) {
      if (coeffs == "auto") {
        c.coeffs.reset();
      } else {
        const auto v = parse_list(coeffs, "--coeffs");
        if (v.size() != 3 && v.size() != 4) throw ValidationError("--coeffs: expected a,b,c or a,b,c,eps");
        c.coeffs = HypoCoeffs::make(v[0], v[1], v[2], v.size() == 4 ? v[3] : 0.0);
      }
    }
    if (!init.empty()) c.init = init;
    if (!equilibrium.empty()) c.equilibrium = equilibrium;
    if (seed) c.seed = *seed;
    if (!out_dir.empty()) {
      c.output_dir = out_dir;
    } else if (!out.empty()) {
      c.output_dir = parent_or_cwd(out).string();
    }
    if (snapshots) c.snapshots = true;
    if (snapshot_every) c.snapshot_every = *snapshot_every;
    c.model = model;
    if (threads > 0) c.threads = threads;
    validate(c);
    return c;
  }

  fs::path trace_path(const SimConfig& c) const { return out.empty() ? fs::path(c.output_dir) / "trace.csv" : fs::path(out); }
};

void print_fit(const DecayFit& fit, std::size_t breaches) {
  std::printf("lambda_fit %.6g  prefactor %.6g  window [%g, %g]  residual %.3g  breaches %zu\n", fit.lambda,
              fit.prefactor, fit.t0, fit.t1, fit.residual, breaches);
  if (fit.notice) std::printf("note: %s\n", fit.notice->c_str());
}

int cmd_simulate_lfp(const RunFlags& flags, int threads) {
  const SimConfig cfg = flags.resolve("lfp", threads);
  const fs::path dir = prepare_dir(cfg.output_dir);
  const std::string hash = config_hash(cfg);
  save_config(cfg, dir / "config.json");
  std::optional<fs::path> snap;
  if (cfg.snapshots) snap = dir / "snapshots";
  const LfpRun run = run_lfp(cfg, snap);
  write_trace_csv(flags.trace_path(cfg), run.sim.trace, hash);
  write_json(dir / "decay_fit.json", fit_json(run.fit), hash);
  if (run.constants) {
    json j = constants_json(*run.constants);
    if (run.recipe) j["recipe"] = recipe_json(*run.recipe);
    write_json(dir / "constants.json", j, hash);
  }
  const auto [lo, hi] = run.coeffs.equivalence_bounds();
  std::printf("coeffs a=%.6g b=%.6g c=%.6g eps=%.3g  (norm equivalence %.3g..%.3g)\n", run.coeffs.a, run.coeffs.b,
              run.coeffs.c, run.coeffs.eps, lo, hi);
  if (run.lambda_cert > 0.0) std::printf("lambda_cert %.6g\n", run.lambda_cert);
  print_fit(run.fit, run.breaches);
  std::printf("max relative mass drift %.3g\n", run.sim.trace.max_relative_mass_drift());
  if (run.breaches > 0) {
    throw NumericalError("triple norm increased at " + std::to_string(run.breaches) + " samples");
  }
  if (!(run.fit.lambda > 0.0)) throw NumericalError("fitted decay rate is not positive");
  return kOk;
}

int cmd_simulate_bgk(const RunFlags& flags, int threads) {
  const SimConfig cfg = flags.resolve("bgk", threads);
  const fs::path dir = prepare_dir(cfg.output_dir);
  const std::string hash = config_hash(cfg);
  save_config(cfg, dir / "config.json");
  const BgkRun run = run_bgk(cfg);
  write_trace_csv(flags.trace_path(cfg), run.sim.trace, hash);
  write_json(dir / "decay_fit.json", fit_json(run.fit), hash);
  write_json(dir / "constants.json",
             {{"format", "levykin-constants"},
              {"version", 1},
              {"C_M", run.eq.C_M},
              {"log_grad_bound", run.eq.log_grad_bound},
              {"coeffs", {{"a", run.coeffs.a}, {"b", run.coeffs.b}, {"c", run.coeffs.c}}}},
             hash);
  std::printf("C_M %.6g  coeffs a=%.6g b=%.6g c=%.6g\n", run.eq.C_M, run.coeffs.a, run.coeffs.b, run.coeffs.c);
  print_fit(run.fit, run.breaches);
  if (run.breaches > 0) {
    throw NumericalError("triple norm increased at " + std::to_string(run.breaches) + " samples");
  }
  if (!(run.fit.lambda > 0.0)) throw NumericalError("fitted decay rate is not positive");
  return kOk;
}

SimConfig grid_config(double alpha, std::optional<double> extent, std::optional<std::size_t> nodes, int threads) {
  SimConfig c;
  c.alpha = alpha;
  if (extent) c.extent = *extent;
  c.nodes = nodes ? *nodes : default_nodes(c.alpha, c.extent);
  if (threads > 0) c.threads = threads;
  validate(c);
  numerics::set_thread_count(c.threads);
  return c;
}

int cmd_equilibrium(double alpha, std::optional<double> extent, std::optional<std::size_t> nodes,
                    const std::string& out, int threads) {
  const SimConfig cfg = grid_config(alpha, extent, nodes, threads);
  prepare_dir(parent_or_cwd(out));
  const auto grid = make_grid(cfg);
  const auto mu = equilibrium_density(alpha, grid);
  const auto dmu = equilibrium_gradient(alpha, grid);
  std::ofstream f(out, std::ios::trunc);
  if (!f) throw IoError("cannot write " + out);
  f << "# levykin-equilibrium v1\n# config_hash: " << config_hash(cfg) << "\n";
  f << "v,mu,grad_mu,envelope1,envelope2\n";
  char buf[160];
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double v = grid->node(i), a = std::abs(v);
    const double e1 = (std::pow(a, 1.0 + alpha) + 1.0) * mu[i];
    const double e2 = a < 1.0 ? std::nan("") : (std::pow(a, 3.0 + alpha) + 1.0) * std::abs(dmu[i]) / a;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", v, mu[i], dmu[i], e1, e2);
    f << buf;
  }
  if (!f) throw IoError("failed writing " + out);
  std::printf("wrote %zu nodes to %s (tail exponent fit %.4f)\n", grid->size(), out.c_str(), tail_exponent_fit(mu));
  return kOk;
}

int cmd_operators_check(double alpha, std::optional<double> extent, std::optional<std::size_t> nodes,
                        std::size_t probes, std::uint64_t seed, const std::string& out, int threads) {
  const SimConfig cfg = grid_config(alpha, extent, nodes, threads);
  const auto grid = make_grid(cfg);
  const std::size_t n = cfg.nodes;
  const auto xv = cross_validate(alpha, cfg.extent, {n / 2, n, 2 * n}, probes, seed);
  const auto ann = equilibrium_annihilation(alpha, *grid);
  const auto st = structure_checks(alpha, grid, probes, seed);
  FormContext ctx(equilibrium_density(alpha, grid), alpha);
  const auto dec = decomposition_checks(ctx, probes / 2, seed);

  const bool xv_ok = xv.converging() && xv.periodic[1] <= 1e-4;
  const bool ann_ok = ann.residual_refined <= ann.residual || ann.residual_refined <= 1e-8;
  const bool mass_ok = st.max_mass_defect <= 1e-8;
  const bool energy_ok = st.min_energy >= 0.0;
  const bool dec_ok = dec.max_relative_residual <= 1e-3 && dec.max_skew_defect <= 1e-10 &&
                      dec.max_symmetry_defect <= 1e-10 && dec.min_s_diagonal >= 0.0 &&
                      dec.max_cauchy_schwarz_excess <= 1e-10;

  json j;
  j["format"] = "levykin-operators-check";
  j["version"] = 1;
  j["alpha"] = alpha;
  j["extent"] = cfg.extent;
  j["nodes"] = n;
  j["cross_validation"] = {{"nodes", xv.nodes},
                           {"periodic_rel_error", xv.periodic},
                           {"zero_extension_rel_error", xv.zero_extension},
                           {"converging", xv.converging()},
                           {"pass", xv_ok}};
  j["equilibrium_annihilation"] = {{"nodes", ann.nodes},
                                   {"residual", ann.residual},
                                   {"residual_refined", ann.residual_refined},
                                   {"pass", ann_ok}};
  j["structure"] = {{"max_mass_defect", st.max_mass_defect},
                    {"min_energy", st.min_energy},
                    {"max_scaling_error", st.max_scaling_error},
                    {"pass", mass_ok && energy_ok}};
  j["decomposition"] = {{"pairs", dec.pairs},
                        {"max_relative_residual", dec.max_relative_residual},
                        {"max_symmetry_defect", dec.max_symmetry_defect},
                        {"max_skew_defect", dec.max_skew_defect},
                        {"max_diagonal_skew", dec.max_diagonal_skew},
                        {"min_s_diagonal", dec.min_s_diagonal},
                        {"max_cauchy_schwarz_excess", dec.max_cauchy_schwarz_excess},
                        {"pass", dec_ok}};
  const bool ok = xv_ok && ann_ok && mass_ok && energy_ok && dec_ok;
  j["pass"] = ok;
  if (out.empty()) {
    j["config_hash"] = config_hash(cfg);
    std::cout << j.dump(2) << '\n';
  } else {
    prepare_dir(parent_or_cwd(out));
    write_json(out, j, config_hash(cfg));
  }
  if (!ok) throw NumericalError("operator checks failed (see report)");
  return kOk;
}

int cmd_constants(double alpha, std::optional<double> extent, std::optional<std::size_t> nodes,
                  const std::string& eps, std::size_t family, std::uint64_t seed, const std::string& out,
                  int threads) {
  SimConfig cfg = grid_config(alpha, extent, nodes, threads);
  if (!eps.empty()) cfg.eps = parse_list(eps, "--eps");
  cfg.probe_family_size = family;
  cfg.seed = seed;
  validate(cfg);
  const auto report = run_constants(cfg);
  json j = constants_json(report);
  j["recipe"] = recipe_json(coefficient_search(report));
  if (out.empty()) {
    j["config_hash"] = config_hash(cfg);
    std::cout << j.dump(2) << '\n';
  } else {
    prepare_dir(parent_or_cwd(out));
    write_json(out, j, config_hash(cfg));
    std::printf("C_P %.6g  C_R %.6g  C_F %.6g\n", report.C_P(), report.C_R(), report.C_F());
  }
  return kOk;
}

std::string trace_hash(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  const std::string key = "# config_hash: ";
  while (std::getline(in, line) && !line.empty() && line[0] == '#') {
    if (line.rfind(key, 0) == 0) return line.substr(key.size());
  }
  return "";
}

int cmd_decay_fit(const std::string& in, const std::string& window, const std::string& column,
                  const std::string& out) {
  const auto [t, y] = read_trace_csv(in, column);
  std::optional<std::pair<double, double>> w;
  if (!window.empty()) {
    const auto v = parse_list(window, "--window");
    if (v.size() != 2) throw ValidationError("--window: expected t0,t1");
    w = std::make_pair(v[0], v[1]);
  }
  const auto fit = decay_fit(t, y, w);
  json j = fit_json(fit);
  j["column"] = column;
  const std::string hash = trace_hash(in);
  if (out.empty()) {
    if (!hash.empty()) j["config_hash"] = hash;
    std::cout << j.dump(2) << '\n';
  } else {
    prepare_dir(parent_or_cwd(out));
    write_json(out, j, hash);
    print_fit(fit, monotonicity_breaches(y));
  }
  return kOk;
}

int cmd_dissipation_check(const std::string& dir, double tolerance, const std::string& out, int threads) {
  if (threads > 0) numerics::set_thread_count(threads);
  const auto man = read_snapshot_manifest(dir);
  if (man.model != "lfp") throw ValidationError("dissipation-check: snapshots of model '" + man.model + "' are not supported");
  if (!man.prefactors) throw ValidationError("dissipation-check: manifest has no dissipation prefactors");
  const auto grid = std::make_shared<const VelocityGrid>(man.extent, man.v_nodes);
  const auto snaps = read_snapshots(dir, man, grid);
  FormContext ctx(periodized_equilibrium(man.alpha, grid), man.alpha, Derivative::spectral);
  DissipationOptions opts;
  opts.tolerance = tolerance;
  const auto rep = dissipation_check(snaps, man.coeffs, *man.prefactors, man.lambda_cert, ctx, opts);

  json j;
  j["format"] = "levykin-dissipation-check";
  j["version"] = 1;
  j["tolerance"] = rep.tolerance;
  j["lambda_cert"] = rep.lambda_cert;
  j["inequality_holds"] = rep.inequality_holds();
  j["rate_holds"] = rep.rate_holds();
  j["failing_times"] = rep.failing_times();
  double worst = -INFINITY;
  json samples = json::array();
  for (const auto& s : rep.samples) {
    worst = std::max(worst, (s.ddt_half_norm2 + s.dissipation) / s.norm2);
    samples.push_back({{"t", s.t},
                       {"ddt_half_norm2", s.ddt_half_norm2},
                       {"dissipation", s.dissipation},
                       {"norm2", s.norm2},
                       {"inequality_ok", s.inequality_ok},
                       {"rate_ok", s.rate_ok}});
  }
  j["worst_relative_excess"] = worst;
  j["samples"] = samples;
  if (out.empty()) {
    j["config_hash"] = man.config_hash;
    std::cout << j.dump(2) << '\n';
  } else {
    prepare_dir(parent_or_cwd(out));
    write_json(out, j, man.config_hash);
    std::printf("%zu interior snapshots, worst (ddt + D)/norm2 = %.4g, inequality %s, rate %s\n",
                rep.samples.size(), worst, rep.inequality_holds() ? "holds" : "FAILS",
                rep.rate_holds() ? "holds" : "FAILS");
  }
  if (!rep.inequality_holds()) throw NumericalError("dissipation inequality fails at " +
                                                    std::to_string(rep.failing_times().size()) + " snapshots");
  return kOk;
}

int report(const char* kind, int code, const std::string& message) {
  const json j = {{"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}};
  std::cerr << j.dump() << '\n';
  if (g_error_dir) {
    std::ofstream f(*g_error_dir / "error.json", std::ios::trunc);
    if (f) f << j.dump(2) << '\n';
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levykin: Levy-Fokker-Planck and heavy-tailed BGK hypocoercivity lab"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (results do not depend on it)")->check(CLI::Range(1, 1024));

  double alpha = 1.0;
  std::optional<double> extent;
  std::optional<std::size_t> nodes;
  std::string out;
  const auto grid_opts = [&](CLI::App* c) {
    c->add_option("--alpha", alpha, "Stability index in (0, 2)")->capture_default_str();
    c->add_option("--extent", extent, "Velocity box half-width V (default 64)");
    c->add_option("--nodes", nodes, "Velocity nodes (default: resolution rule for alpha)");
  };

  auto* eq = app.add_subcommand("equilibrium", "Tabulate mu_alpha, its gradient and the tail envelopes");
  grid_opts(eq);
  eq->add_option("--out", out, "Output CSV")->required();

  std::size_t probes = 20;
  std::uint64_t seed = 1;
  auto* ops = app.add_subcommand("operators-check", "Cross-validate the fractional operators and their invariants");
  grid_opts(ops);
  ops->add_option("--probes", probes, "Band-limited probes")->capture_default_str()->check(CLI::Range(2, 10000));
  ops->add_option("--seed", seed, "Probe seed")->capture_default_str();
  ops->add_option("--out", out, "Output JSON (default: stdout)");

  std::string eps;
  std::size_t family = 64;
  auto* cst = app.add_subcommand("constants", "Estimate C_P, C_R, C_F, K(eps) and the coefficient recipe");
  grid_opts(cst);
  cst->add_option("--eps", eps, "Comma-separated eps values (default 0.05,0.1,0.2)");
  cst->add_option("--family", family, "Probe family size")->capture_default_str();
  cst->add_option("--seed", seed, "Probe seed")->capture_default_str();
  cst->add_option("--out", out, "Output JSON (default: stdout)");

  RunFlags lfp_flags, bgk_flags;
  auto* lfp = app.add_subcommand("simulate-lfp", "Run the kinetic Levy-Fokker-Planck solver");
  lfp_flags.attach(lfp, false);
  auto* bgk = app.add_subcommand("simulate-bgk", "Run the heavy-tailed BGK solver");
  bgk_flags.attach(bgk, true);

  std::string in, window, column = "triple_norm";
  auto* fit = app.add_subcommand("decay-fit", "Fit an exponential rate to a trace column");
  fit->add_option("--in", in, "Trace CSV")->required();
  fit->add_option("--window", window, "t0,t1 (default: whole trace)");
  fit->add_option("--column", column, "Column to fit")->capture_default_str();
  fit->add_option("--out", out, "Output JSON (default: stdout)");

  std::string snap_dir;
  double tolerance = 1e-3;
  auto* dis = app.add_subcommand("dissipation-check", "Check the dissipation inequality on a snapshot dump");
  dis->add_option("--snapshots", snap_dir, "Snapshot directory")->required();
  dis->add_option("--tolerance", tolerance, "Relative tolerance")->capture_default_str();
  dis->add_option("--out", out, "Output JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*eq) return cmd_equilibrium(alpha, extent, nodes, out, threads);
    if (*ops) return cmd_operators_check(alpha, extent, nodes, probes, seed, out, threads);
    if (*cst) return cmd_constants(alpha, extent, nodes, eps, family, seed, out, threads);
    if (*lfp) return cmd_simulate_lfp(lfp_flags, threads);
    if (*bgk) return cmd_simulate_bgk(bgk_flags, threads);
    if (*fit) return cmd_decay_fit(in, window, column, out);
    if (*dis) return cmd_dissipation_check(snap_dir, tolerance, out, threads);
  } catch (const ValidationError& e) {
    return report("validation", kValidation, e.what());
  } catch (const NumericalError& e) {
    return report("numerical", kNumerical, e.what());
  } catch (const IoError& e) {
    return report("io", kIo, e.what());
  } catch (const std::exception& e) {
    return report("numerical", kNumerical, e.what());
  }
  return kValidation;
}
