#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "levykin/errors.hpp"

namespace levykin::app {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError(where + ": expected an object");
  std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!names.contains(key)) {
      std::string list;
      for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
      throw ValidationError("unknown key '" + (where.empty() ? key : where + "." + key) + "' (allowed: " + list + ")");
    }
  }
}

std::string join(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

double number(const json& obj, const std::string& where, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(join(where, key) + ": expected a number");
  return v.get<double>();
}

std::uint64_t count(const json& obj, const std::string& where, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ValidationError(join(where, key) + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string text(const json& obj, const std::string& where, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ValidationError(join(where, key) + ": expected a string");
  return v.get<std::string>();
}

bool flag(const json& obj, const std::string& where, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) throw ValidationError(join(where, key) + ": expected true or false");
  return v.get<bool>();
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json to_json(const SimConfig& c) {
  json j;
  j["model"] = c.model;
  j["alpha"] = c.alpha;
  j["dim"] = c.dim;
  j["velocity"] = {{"extent", c.extent}, {"nodes", c.nodes}};
  j["torus"] = {{"modes", c.x_modes}};
  j["time"] = {{"dt", c.dt}, {"t_end", c.t_end}, {"sample_every", c.sample_every}, {"fit_from", c.fit_from}};
  if (c.coeffs) {
    j["coeffs"] = {{"a", c.coeffs->a}, {"b", c.coeffs->b}, {"c", c.coeffs->c}, {"eps", c.coeffs->eps}};
  } else {
    j["coeffs"] = "auto";
  }
  j["init"] = c.init;
  j["equilibrium"] = c.equilibrium;
  j["constants"] = {{"eps", c.eps}, {"probe_family_size", c.probe_family_size}};
  j["output"] = {{"dir", c.output_dir}, {"snapshots", c.snapshots}, {"snapshot_every", c.snapshot_every}};
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

SimConfig from_json(const json& j) {
  check_keys(j, "", {"model", "alpha", "dim", "velocity", "torus", "time", "coeffs", "init", "equilibrium",
                     "constants", "output", "seed", "threads", "config_hash"});
  // "config_hash" is written into saved configs for provenance and ignored here.
  if (j.contains("config_hash") && !j["config_hash"].is_string()) throw ValidationError("config_hash: expected a string");
  SimConfig c;
  c.model = text(j, "", "model", c.model);
  c.alpha = number(j, "", "alpha", c.alpha);
  c.dim = static_cast<int>(count(j, "", "dim", static_cast<std::uint64_t>(c.dim)));
  bool nodes_given = false;
  if (j.contains("velocity")) {
    const auto& v = j["velocity"];
    check_keys(v, "velocity", {"extent", "nodes"});
    c.extent = number(v, "velocity", "extent", c.extent);
    nodes_given = v.contains("nodes");
    c.nodes = count(v, "velocity", "nodes", c.nodes);
  }
  if (!nodes_given && c.alpha > 0.0 && c.alpha < 2.0 && c.extent > 0.0) c.nodes = default_nodes(c.alpha, c.extent);
  if (j.contains("torus")) {
    check_keys(j["torus"], "torus", {"modes"});
    c.x_modes = count(j["torus"], "torus", "modes", c.x_modes);
  }
  if (j.contains("time")) {
    const auto& t = j["time"];
    check_keys(t, "time", {"dt", "t_end", "sample_every", "fit_from"});
    c.dt = number(t, "time", "dt", c.dt);
    c.t_end = number(t, "time", "t_end", c.t_end);
    c.sample_every = count(t, "time", "sample_every", c.sample_every);
    c.fit_from = number(t, "time", "fit_from", c.fit_from);
  }
  if (j.contains("coeffs")) {
    const auto& k = j["coeffs"];
    if (k.is_string()) {
      if (k.get<std::string>() != "auto") throw ValidationError("coeffs: expected \"auto\" or an object {a, b, c, eps}");
      c.coeffs.reset();
    } else {
      check_keys(k, "coeffs", {"a", "b", "c", "eps"});
      for (const char* key : {"a", "b", "c"}) {
        if (!k.contains(key)) throw ValidationError(std::string("coeffs.") + key + ": required");
      }
      c.coeffs = HypoCoeffs{number(k, "coeffs", "a", 0.0), number(k, "coeffs", "b", 0.0), number(k, "coeffs", "c", 0.0),
                            number(k, "coeffs", "eps", 0.0)};
    }
  }
  c.init = text(j, "", "init", c.init);
  c.equilibrium = text(j, "", "equilibrium", c.equilibrium);
  if (j.contains("constants")) {
    const auto& k = j["constants"];
    check_keys(k, "constants", {"eps", "probe_family_size"});
    if (k.contains("eps")) {
      if (!k["eps"].is_array()) throw ValidationError("constants.eps: expected an array of numbers");
      c.eps.clear();
      for (const auto& e : k["eps"]) {
        if (!e.is_number()) throw ValidationError("constants.eps: expected an array of numbers");
        c.eps.push_back(e.get<double>());
      }
    }
    c.probe_family_size = count(k, "constants", "probe_family_size", c.probe_family_size);
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    check_keys(o, "output", {"dir", "snapshots", "snapshot_every"});
    c.output_dir = text(o, "output", "dir", c.output_dir);
    c.snapshots = flag(o, "output", "snapshots", c.snapshots);
    c.snapshot_every = count(o, "output", "snapshot_every", c.snapshot_every);
  }
  c.seed = count(j, "", "seed", c.seed);
  c.threads = static_cast<int>(count(j, "", "threads", static_cast<std::uint64_t>(c.threads)));
  return c;
}

}  // namespace

std::size_t default_nodes(double alpha, double extent) {
  auto n = static_cast<std::size_t>(std::ceil(2048.0 * extent / 64.0));
  n = std::max<std::size_t>(16, n + (n % 2));
  for (int k = 0; k < 12; ++k, n *= 2) {
    const double xi_max = std::numbers::pi * static_cast<double>(n) / (2.0 * extent);
    if (std::exp(-std::pow(xi_max, alpha) / alpha) < 1e-12) return n;
  }
  return n;
}

std::vector<std::string> preset_names() { return {"lfp-default", "bgk-default"}; }

SimConfig preset(const std::string& name) {
  SimConfig c;
  if (name == "lfp-default") return c;
  if (name == "bgk-default") {
    c.model = "bgk";
    return c;
  }
  throw ValidationError("unknown preset '" + name + "' (known: lfp-default, bgk-default)");
}

void validate(const SimConfig& c) {
  if (c.model != "lfp" && c.model != "bgk") throw ValidationError("model: must be \"lfp\" or \"bgk\"");
  if (!(c.alpha > 0.0 && c.alpha < 2.0)) {
    throw ValidationError("alpha: " + std::to_string(c.alpha) + " violates 0 < alpha < 2");
  }
  if (c.dim != 1) throw ValidationError("dim: only dim = 1 is implemented");
  if (!(c.extent > 0.0) || !std::isfinite(c.extent)) throw ValidationError("velocity.extent: must be positive");
  if (c.nodes < 16 || c.nodes % 2 != 0) throw ValidationError("velocity.nodes: must be even and >= 16");
  if (c.model == "lfp") {
    const double xi_max = std::numbers::pi * static_cast<double>(c.nodes) / (2.0 * c.extent);
    if (!(std::exp(-std::pow(xi_max, c.alpha) / c.alpha) < 1e-12)) {
      throw ValidationError("velocity.nodes: " + std::to_string(c.nodes) + " nodes on extent " + std::to_string(c.extent) +
                            " leave exp(-xi_max^alpha/alpha) above 1e-12 (the resolution rule gives " +
                            std::to_string(default_nodes(c.alpha, c.extent)) + ")");
    }
  }
  if (c.x_modes < 4 || c.x_modes % 2 != 0) throw ValidationError("torus.modes: must be even and >= 4");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ValidationError("time.dt: must be positive");
  if (!(c.t_end >= c.dt) || !std::isfinite(c.t_end)) throw ValidationError("time.t_end: must be >= time.dt");
  if (c.sample_every == 0) throw ValidationError("time.sample_every: must be >= 1");
  if (!(c.fit_from >= 0.0) || !(c.fit_from < c.t_end)) throw ValidationError("time.fit_from: must lie in [0, t_end)");
  if (c.coeffs) {
    const auto& k = *c.coeffs;
    if (!(k.a > 0.0 && k.b > 0.0 && k.c > 0.0)) throw ValidationError("coeffs: a, b, c must be positive");
    if (!(k.c * k.c < k.a * k.b)) throw ValidationError("coeffs: c^2 < ab is required for a norm");
    if (!(k.eps >= 0.0)) throw ValidationError("coeffs.eps: must be non-negative");
  }
  if (c.init.empty()) throw ValidationError("init: empty");
  if (c.equilibrium.empty()) throw ValidationError("equilibrium: empty");
  if (c.eps.empty()) throw ValidationError("constants.eps: at least one value required");
  for (double e : c.eps) {
    if (!(e > 0.0 && e < 1.0)) throw ValidationError("constants.eps: values must lie in (0, 1)");
  }
  if (!std::is_sorted(c.eps.begin(), c.eps.end()) || std::adjacent_find(c.eps.begin(), c.eps.end()) != c.eps.end()) {
    throw ValidationError("constants.eps: values must be strictly increasing");
  }
  if (c.probe_family_size < 4) throw ValidationError("constants.probe_family_size: must be >= 4");
  if (c.output_dir.empty()) throw ValidationError("output.dir: empty");
  if (c.snapshot_every == 0) throw ValidationError("output.snapshot_every: must be >= 1");
  if (c.threads < 1 || c.threads > 1024) throw ValidationError("threads: must be in 1..1024");
}

SimConfig parse_config(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
  SimConfig c;
  try {
    c = from_json(j);
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
  validate(c);
  return c;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string dump_config(const SimConfig& cfg) { return to_json(cfg).dump(2); }

void save_config(const SimConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  auto j = to_json(cfg);
  j["config_hash"] = config_hash(cfg);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

std::string config_hash(const SimConfig& cfg) {
  auto canonical = cfg;
  canonical.threads = 1;
  canonical.output_dir.clear();
  const std::string canon = to_json(canonical).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace levykin::app
