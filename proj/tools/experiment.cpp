#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "levykin/equilibrium.hpp"
#include "levykin/errors.hpp"
#include "levykin/numerics.hpp"
#include "levykin/snapshot_io.hpp"

namespace levykin::app {
namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

double parse_double(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  while (end && *end == ' ') ++end;
  if (cell.empty() || end == cell.c_str() || (end && *end != '\0' && *end != '\r')) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": not a number: '" + cell + "'");
  }
  return v;
}

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path, bool header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool skipped_header = !header;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) row.push_back(parse_double(cell, path, lineno));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json estimate_json(const Estimate& e) {
  return {{"value", e.value}, {"probes_used", e.used}, {"probes_skipped", e.skipped}, {"argmax", e.argmax}};
}

}  // namespace

GridPtr make_grid(const SimConfig& cfg) {
  auto grid = std::make_shared<const VelocityGrid>(cfg.extent, cfg.nodes);
  require_resolved(cfg.alpha, *grid, 1e-12);
  return grid;
}

VelocityField read_profile_csv(const std::filesystem::path& path, const GridPtr& grid) {
  std::ifstream probe(path);
  if (!probe) throw IoError("cannot open " + path.string());
  std::string first;
  while (std::getline(probe, first) && (first.empty() || first[0] == '#')) {
  }
  const bool header = !first.empty() && !(std::isdigit(static_cast<unsigned char>(first[0])) || first[0] == '-' ||
                                          first[0] == '+' || first[0] == '.');
  const auto rows = read_numeric_csv(path, header);
  if (rows.size() != grid->size()) {
    throw ValidationError(path.string() + ": " + std::to_string(rows.size()) + " rows, grid has " +
                          std::to_string(grid->size()) + " nodes");
  }
  std::vector<double> values(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != 2) throw ValidationError(path.string() + ": expected two columns (v, M)");
    if (std::abs(rows[i][0] - grid->node(i)) > 1e-9 * std::max(1.0, grid->extent())) {
      throw ValidationError(path.string() + ": row " + std::to_string(i) + " has v = " + fmt(rows[i][0]) +
                            ", grid node is " + fmt(grid->node(i)));
    }
    values[i] = rows[i][1];
  }
  return VelocityField(grid, std::move(values));
}

VelocityField make_bgk_profile(const SimConfig& cfg, const GridPtr& grid) {
  if (cfg.equilibrium == "stable") return equilibrium_density(cfg.alpha, grid);
  if (cfg.equilibrium == "cauchy") return sample(grid, [](double v) { return 1.0 / (std::numbers::pi * (1.0 + v * v)); });
  if (!std::filesystem::exists(cfg.equilibrium)) {
    throw ValidationError("equilibrium: '" + cfg.equilibrium + "' is neither a preset (stable, cauchy) nor a file");
  }
  return read_profile_csv(cfg.equilibrium, grid);
}

PhaseField make_initial(const SimConfig& cfg, const VelocityField& profile) {
  const std::size_t m = cfg.x_modes;
  const auto& grid = profile.grid_ptr();
  std::vector<double> rho(m, 1.0);
  const auto x = [m](std::size_t i) { return 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m); };
  if (cfg.init == "perturbed-cos") {
    for (std::size_t i = 0; i < m; ++i) rho[i] = 1.0 + 0.5 * std::cos(x(i));
    return PhaseField::separable(m, rho, profile);
  }
  if (cfg.init == "two-mode") {
    for (std::size_t i = 0; i < m; ++i) rho[i] = 1.0 + 0.5 * std::cos(x(i)) + 0.25 * std::sin(2.0 * x(i));
    return PhaseField::separable(m, rho, profile);
  }
  if (cfg.init == "equilibrium") return PhaseField::separable(m, rho, profile);
  if (cfg.init == "homogeneous") {
    auto g = profile;
    for (std::size_t j = 0; j < grid->size(); ++j) {
      const double v = grid->node(j);
      g.values()[j] *= 1.0 + v / (2.0 * (1.0 + v * v));
    }
    return PhaseField::separable(m, rho, g);
  }
  if (!std::filesystem::exists(cfg.init)) {
    throw ValidationError("init: '" + cfg.init +
                          "' is neither a preset (perturbed-cos, two-mode, homogeneous, equilibrium) nor a file");
  }
  const auto rows = read_numeric_csv(cfg.init, false);
  if (rows.size() != m) {
    throw ValidationError(cfg.init + ": " + std::to_string(rows.size()) + " rows, expected torus.modes = " +
                          std::to_string(m));
  }
  std::vector<double> values;
  values.reserve(m * grid->size());
  for (const auto& r : rows) {
    if (r.size() != grid->size()) {
      throw ValidationError(cfg.init + ": rows must hold " + std::to_string(grid->size()) + " values");
    }
    values.insert(values.end(), r.begin(), r.end());
  }
  PhaseField f(m, grid, std::move(values));
  if (!f.is_finite()) throw ValidationError(cfg.init + ": non-finite values");
  return f;
}

std::size_t monotonicity_breaches(const std::vector<double>& values, double slack) {
  std::size_t n = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1] * (1.0 + slack)) ++n;
  }
  return n;
}

ConstantsReport run_constants(const SimConfig& cfg) {
  validate(cfg);
  numerics::set_thread_count(cfg.threads);
  const auto grid = make_grid(cfg);
  FormContext ctx(equilibrium_density(cfg.alpha, grid), cfg.alpha);
  ConstantsOptions opts;
  opts.eps = cfg.eps;
  if (cfg.coeffs && cfg.coeffs->eps > 0.0 && std::find(opts.eps.begin(), opts.eps.end(), cfg.coeffs->eps) == opts.eps.end()) {
    opts.eps.push_back(cfg.coeffs->eps);
    std::sort(opts.eps.begin(), opts.eps.end());
  }
  opts.family_size = cfg.probe_family_size;
  opts.seed = cfg.seed;
  return estimate_constants(ctx, opts);
}

LfpRun run_lfp(const SimConfig& cfg, const std::optional<std::filesystem::path>& snapshot_dir) {
  validate(cfg);
  if (cfg.model != "lfp") throw ValidationError("model: expected \"lfp\" for simulate-lfp");
  if (cfg.equilibrium != "stable") throw ValidationError("equilibrium: the LFP model relaxes to mu_alpha (\"stable\")");
  numerics::set_thread_count(cfg.threads);
  const auto grid = make_grid(cfg);
  const auto p = AlphaParams::make(cfg.alpha, cfg.dim);

  std::optional<ConstantsReport> constants;
  std::optional<RecipeResult> recipe;
  std::optional<DissipationPrefactors> prefactors;
  HypoCoeffs coeffs;
  double lambda_cert = 0.0;
  if (!cfg.coeffs || snapshot_dir) constants = run_constants(cfg);
  if (!cfg.coeffs) {
    recipe = coefficient_search(*constants);
    if (!recipe->feasible) throw NumericalError("coefficient recipe infeasible: " + recipe->binding);
    coeffs = recipe->coeffs;
    prefactors = recipe->prefactors;
    lambda_cert = recipe->lambda_cert;
  } else {
    coeffs = *cfg.coeffs;
    if (constants && coeffs.eps > 0.0) {
      const auto k = RecipeConstants::from(*constants);
      const double K = constants->K(coeffs.eps);
      prefactors = dissipation_prefactors(coeffs, k, K);
      lambda_cert = certified_rate(coeffs, k, K);
    }
  }

  const auto mu = periodized_equilibrium(cfg.alpha, grid);
  const WeightedL2 space(mu, Derivative::spectral);
  const auto f0 = make_initial(cfg, mu);

  SimOptions opts;
  opts.dt = cfg.dt;
  opts.t_end = cfg.t_end;
  opts.sample_every = cfg.sample_every;
  opts.fit_from = cfg.fit_from;
  std::optional<SnapshotWriter> writer;
  if (snapshot_dir) {
    SnapshotManifest man;
    man.model = "lfp";
    man.alpha = cfg.alpha;
    man.extent = cfg.extent;
    man.v_nodes = cfg.nodes;
    man.x_nodes = cfg.x_modes;
    man.coeffs = coeffs;
    man.prefactors = prefactors;
    man.lambda_cert = lambda_cert;
    man.config_hash = config_hash(cfg);
    writer.emplace(*snapshot_dir, man);
    opts.snapshot_every = cfg.snapshot_every;
    opts.on_snapshot = [&](double t, const PhaseField& f) { writer->add(t, f); };
  }
  auto sim = simulate(f0, p, coeffs, space, opts);
  if (writer) writer->finish();
  const auto fit = decay_fit(sim.trace, std::make_pair(cfg.fit_from, cfg.t_end));
  const auto breaches = monotonicity_breaches(sim.trace.triple_norm);
  return LfpRun{std::move(sim), coeffs, std::move(constants), std::move(recipe), prefactors, lambda_cert, fit, breaches};
}

BgkRun run_bgk(const SimConfig& cfg) {
  validate(cfg);
  if (cfg.model != "bgk") throw ValidationError("model: expected \"bgk\" for simulate-bgk");
  numerics::set_thread_count(cfg.threads);
  const auto grid = std::make_shared<const VelocityGrid>(cfg.extent, cfg.nodes);
  auto eq = check_hypotheses(make_bgk_profile(cfg, grid));
  const HypoCoeffs coeffs = cfg.coeffs ? *cfg.coeffs : bgk_recipe(eq);
  const auto f0 = make_initial(cfg, eq.M);
  SimOptions opts;
  opts.dt = cfg.dt;
  opts.t_end = cfg.t_end;
  opts.sample_every = cfg.sample_every;
  opts.fit_from = cfg.fit_from;
  auto sim = simulate_bgk(f0, eq, coeffs, opts);
  const auto fit = decay_fit(sim.trace, std::make_pair(cfg.fit_from, cfg.t_end));
  const auto breaches = monotonicity_breaches(sim.trace.triple_norm);
  return BgkRun{std::move(sim), std::move(eq), coeffs, fit, breaches};
}

json constants_json(const ConstantsReport& r) {
  json j;
  j["format"] = "levykin-constants";
  j["version"] = 1;
  j["C_P"] = estimate_json(r.poincare);
  j["C_R"] = estimate_json(r.regularization);
  j["C_F"] = estimate_json(r.combined);
  j["K"] = json::array();
  for (const auto& [eps, e] : r.interpolation) {
    auto k = estimate_json(e);
    k["eps"] = eps;
    j["K"].push_back(k);
  }
  j["torus_poincare"] = r.torus_poincare;
  if (r.C_M) j["C_M"] = *r.C_M;
  j["family"] = r.family;
  return j;
}

json recipe_json(const RecipeResult& r) {
  json j;
  j["feasible"] = r.feasible;
  if (!r.feasible) {
    j["binding_constraint"] = r.binding;
    return j;
  }
  j["coeffs"] = {{"a", r.coeffs.a}, {"b", r.coeffs.b}, {"c", r.coeffs.c}, {"eps", r.coeffs.eps}};
  j["K_eps"] = r.K;
  j["dissipation_prefactors"] = {
      {"S", r.prefactors.s}, {"S_dx", r.prefactors.s_dx}, {"S_dv", r.prefactors.s_dv}, {"dx_norm", r.prefactors.dx}};
  j["lambda_cert"] = r.lambda_cert;
  return j;
}

json fit_json(const DecayFit& f) {
  json j;
  j["format"] = "levykin-decay-fit";
  j["version"] = 1;
  j["lambda"] = f.lambda;
  j["prefactor"] = f.prefactor;
  j["window"] = {f.t0, f.t1};
  j["residual"] = f.residual;
  j["samples"] = f.samples;
  if (f.notice) j["notice"] = *f.notice;
  return j;
}

void write_trace_csv(const std::filesystem::path& path, const SimTrace& tr, const std::string& hash) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# levykin-trace v1\n# config_hash: " << hash << '\n';
  out << "t,mass,triple_norm,h1_norm,l2_norm,fitted_lambda_running\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out << fmt(tr.times[i]) << ',' << fmt(tr.mass[i]) << ',' << fmt(tr.triple_norm[i]) << ',' << fmt(tr.h1_norm[i])
        << ',' << fmt(tr.l2_norm[i]) << ',' << fmt(tr.fitted_lambda_running[i]) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::pair<std::vector<double>, std::vector<double>> read_trace_csv(const std::filesystem::path& path,
                                                                   const std::string& column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> names;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    names = split(line, ',');
    break;
  }
  for (auto& n : names) {
    if (!n.empty() && n.back() == '\r') n.pop_back();
  }
  const auto find = [&](const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ValidationError(path.string() + ": no column '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
  };
  const std::size_t ct = find("t"), cv = find(column);
  std::vector<double> t, v;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    if (cells.size() != names.size()) throw IoError(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    t.push_back(parse_double(cells[ct], path, lineno));
    v.push_back(parse_double(cells[cv], path, lineno));
  }
  return {t, v};
}

void write_json(const std::filesystem::path& path, json j, const std::string& hash) {
  if (!hash.empty()) j["config_hash"] = hash;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace levykin::app
