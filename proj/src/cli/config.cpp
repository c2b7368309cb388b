// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/cli/config.hpp"

#include "invspec/logistic.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>

namespace invspec::cli {

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {"eig",          "forward",  "inverse",
                                                 "crosscheck",   "sweep-q0", "sweep-lambda",
                                                 "converge",     "multi"};
  return names;
}

Grid GridSpec::build() const {
  return build_grid(dim, extents, n);
}

Grid GridSpec::build(int n_per_axis) const {
  return build_grid(dim, extents, {n_per_axis, n_per_axis});
}

namespace {

const std::set<std::string> kCommonKeys = {"command", "dim",     "n",         "extents",
                                           "q0",      "p",       "seed",      "tol",
                                           "maxit",   "eig_tol", "eig_maxit", "output_dir"};

std::set<std::string> command_keys(const std::string& cmd) {
  if (cmd == "forward") return {"lambda", "lambda_offset", "multistart"};
  if (cmd == "inverse") return {"lambda", "lambda_offset"};
  if (cmd == "crosscheck") return {"lambda", "lambda_offset", "starts", "start_amplitude"};
  if (cmd == "sweep-q0") return {"lambda", "lambda_offset", "direction", "deltas"};
  if (cmd == "sweep-lambda") return {"lambda_schedule", "gap_schedule"};
  if (cmd == "converge") return {"lambda", "lambda_offset", "grids"};
  if (cmd == "multi") return {"targets", "exponent_mode"};
  return {};
}

bool needs_lambda(const std::string& cmd) {
  return cmd == "forward" || cmd == "inverse" || cmd == "crosscheck" || cmd == "sweep-q0" ||
         cmd == "converge";
}

template <class T>
T get(const Json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

double get_number(const Json& j, const std::string& key) {
  if (!j.at(key).is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

int get_int(const Json& j, const std::string& key) {
  if (!j.at(key).is_number_integer()) {
    throw ConfigError("config key '" + key + "' must be an integer");
  }
  return j.at(key).get<int>();
}

std::vector<double> get_numbers(const Json& j, const std::string& key) {
  const Json& a = j.at(key);
  if (!a.is_array()) throw ConfigError("config key '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : a) {
    if (!x.is_number()) throw ConfigError("config key '" + key + "' must contain numbers only");
    out.push_back(x.get<double>());
  }
  return out;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

const std::set<std::string>& family_keys(const std::string& family) {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"constant", {"value"}},
      {"step", {"left", "right", "position"}},
      {"gaussian_well", {"depth", "width", "center"}},
      {"fourier_random", {"modes", "amplitude"}},
      {"log_singular", {"scale"}},
      {"csv_file", {"path"}},
  };
  const auto it = keys.find(family);
  if (it == keys.end()) {
    std::string known;
    for (const auto& f : potential_families()) known += (known.empty() ? "" : ", ") + f;
    throw ConfigError("unknown potential family '" + family + "' (known: " + known + ")");
  }
  return it->second;
}

PotentialDescriptor parse_potential(const Json& j, const std::string& where) {
  PotentialDescriptor d;
  if (j.is_number()) {
    d.value = j.get<double>();
    return d;
  }
  if (j.is_string()) {
    d.family = j.get<std::string>();
    family_keys(d.family);
    return d;
  }
  if (!j.is_object()) throw ConfigError("'" + where + "' must be a number, name or object");
  if (!j.contains("family")) throw ConfigError("'" + where + "' needs a 'family'");
  d.family = get<std::string>(j, "family");
  const auto& allowed = family_keys(d.family);
  for (const auto& [key, value] : j.items()) {
    if (key != "family" && !allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where + " (" + d.family + ")");
    }
  }
  if (j.contains("value")) d.value = get_number(j, "value");
  if (j.contains("left")) d.left = get_number(j, "left");
  if (j.contains("right")) d.right = get_number(j, "right");
  if (j.contains("position")) d.position = get_number(j, "position");
  if (j.contains("depth")) d.depth = get_number(j, "depth");
  if (j.contains("width")) d.width = get_number(j, "width");
  if (j.contains("center")) d.center = get_numbers(j, "center");
  if (j.contains("modes")) d.modes = get_int(j, "modes");
  if (j.contains("amplitude")) d.amplitude = get_number(j, "amplitude");
  if (j.contains("scale")) d.scale = get_number(j, "scale");
  if (j.contains("path")) d.path = get<std::string>(j, "path");
  return d;
}

Json potential_json(const PotentialDescriptor& d) {
  Json j{{"family", d.family}};
  if (d.family == "constant") j["value"] = d.value;
  if (d.family == "step") {
    j["left"] = d.left;
    j["right"] = d.right;
    j["position"] = d.position;
  }
  if (d.family == "gaussian_well") {
    j["depth"] = d.depth;
    j["width"] = d.width;
    if (!d.center.empty()) j["center"] = d.center;
  }
  if (d.family == "fourier_random") {
    j["modes"] = d.modes;
    j["amplitude"] = d.amplitude;
  }
  if (d.family == "log_singular") j["scale"] = d.scale;
  if (d.family == "csv_file") j["path"] = d.path;
  return j;
}

void apply_defaults(RunConfig& c) {
  const std::string& cmd = c.command;
  if (c.tol <= 0.0) {
    c.tol = cmd == "eig" ? 1e-8 : cmd == "crosscheck" ? 1e-5 : 1e-10;
  }
  if (c.maxit <= 0) {
    c.maxit = cmd == "eig" ? 2000 : cmd == "crosscheck" ? 4000 : cmd == "multi" ? 100 : 200;
  }
  if (c.eig_tol <= 0.0) c.eig_tol = cmd == "eig" ? c.tol : cmd == "crosscheck" ? 1e-9 : 1e-8;
  if (cmd == "eig") c.eig_maxit = c.maxit;
}

}  // namespace

RunConfig parse_config(const Json& input) {
  const Json& doc = input.is_object() && input.contains("tool") && input.contains("config")
                        ? input.at("config")
                        : input;
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  if (!doc.contains("command")) throw ConfigError("config needs a 'command'");
  c.command = get<std::string>(doc, "command");
  if (std::find(commands().begin(), commands().end(), c.command) == commands().end()) {
    throw ConfigError("unknown command '" + c.command + "'");
  }
  const auto extra = command_keys(c.command);
  for (const auto& [key, value] : doc.items()) {
    if (!kCommonKeys.count(key) && !extra.count(key)) {
      throw ConfigError("unknown config key '" + key + "' for command '" + c.command + "'");
    }
    if (value.is_null() && key != "seed") {
      throw ConfigError("config key '" + key + "' is null");
    }
  }

  if (doc.contains("dim")) c.grid.dim = get_int(doc, "dim");
  if (c.grid.dim != 1 && c.grid.dim != 2) throw ConfigError("dim must be 1 or 2");
  if (doc.contains("n")) {
    const Json& n = doc.at("n");
    if (n.is_number_integer()) {
      c.grid.n = {n.get<int>(), n.get<int>()};
    } else if (n.is_array() && static_cast<int>(n.size()) == c.grid.dim &&
               std::all_of(n.begin(), n.end(), [](const Json& x) { return x.is_number_integer(); })) {
      c.grid.n = {n[0].get<int>(), c.grid.dim == 2 ? n[1].get<int>() : n[0].get<int>()};
    } else {
      throw ConfigError("'n' must be an integer or one integer per axis");
    }
  }
  if (c.grid.dim == 1) c.grid.n[1] = c.grid.n[0];
  if (doc.contains("extents")) {
    const Json& e = doc.at("extents");
    if (!e.is_array() || static_cast<int>(e.size()) != c.grid.dim) {
      throw ConfigError("'extents' must hold one [a, b] pair per axis");
    }
    for (int a = 0; a < c.grid.dim; ++a) {
      if (!e[a].is_array() || e[a].size() != 2 || !e[a][0].is_number() || !e[a][1].is_number()) {
        throw ConfigError("'extents' must hold one [a, b] pair per axis");
      }
      c.grid.extents[a] = {e[a][0].get<double>(), e[a][1].get<double>()};
    }
  }
  const Grid grid = c.grid.build();

  if (doc.contains("q0")) c.q0 = parse_potential(doc.at("q0"), "q0");
  if (doc.contains("p")) c.p = get_number(doc, "p");
  validate_exponent(c.p, grid.dim());
  if (doc.contains("seed") && !doc.at("seed").is_null()) {
    const Json& seed = doc.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
      throw ConfigError("'seed' must be a nonnegative integer");
    }
    c.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("tol")) c.tol = get_number(doc, "tol");
  if (doc.contains("maxit")) c.maxit = get_int(doc, "maxit");
  if (doc.contains("eig_tol")) c.eig_tol = get_number(doc, "eig_tol");
  if (doc.contains("eig_maxit")) c.eig_maxit = get_int(doc, "eig_maxit");
  if (doc.contains("tol") && !(c.tol > 0.0)) throw ConfigError("'tol' must be positive");
  if (doc.contains("maxit") && c.maxit < 1) throw ConfigError("'maxit' must be >= 1");
  if (doc.contains("eig_tol") && !(c.eig_tol > 0.0)) throw ConfigError("'eig_tol' must be positive");
  if (c.eig_maxit < 1) throw ConfigError("'eig_maxit' must be >= 1");
  if (doc.contains("output_dir")) c.output_dir = get<std::string>(doc, "output_dir");
  if (c.output_dir.empty()) throw ConfigError("'output_dir' must not be empty");

  if (needs_lambda(c.command)) {
    const bool has_abs = doc.contains("lambda");
    const bool has_off = doc.contains("lambda_offset");
    if (has_abs == has_off) {
      throw ConfigError("command '" + c.command + "' needs exactly one of lambda, lambda_offset");
    }
    if (has_abs) c.lambda = get_number(doc, "lambda");
    if (has_off) c.lambda_offset = get_number(doc, "lambda_offset");
  }

  if (doc.contains("multistart")) c.multistart = get_int(doc, "multistart");
  if (c.multistart < 0) throw ConfigError("'multistart' must be >= 0");
  if (doc.contains("starts")) c.starts = get_int(doc, "starts");
  if (c.starts < 1) throw ConfigError("'starts' must be >= 1");
  if (doc.contains("start_amplitude")) c.start_amplitude = get_number(doc, "start_amplitude");

  if (c.command == "sweep-q0") {
    if (!doc.contains("direction") || !doc.contains("deltas")) {
      throw ConfigError("sweep-q0 needs 'direction' and 'deltas'");
    }
    c.direction = parse_potential(doc.at("direction"), "direction");
    c.deltas = get_numbers(doc, "deltas");
    if (c.deltas.empty() || !strictly_decreasing(c.deltas)) {
      throw ConfigError("'deltas' must be a nonempty strictly decreasing schedule");
    }
  }
  if (c.command == "sweep-lambda") {
    const bool abs = doc.contains("lambda_schedule");
    const bool gap = doc.contains("gap_schedule");
    if (abs == gap) {
      throw ConfigError("sweep-lambda needs exactly one of lambda_schedule, gap_schedule");
    }
    auto& s = abs ? c.lambda_schedule : c.gap_schedule;
    s = get_numbers(doc, abs ? "lambda_schedule" : "gap_schedule");
    if (s.empty() || !strictly_decreasing(s)) {
      throw ConfigError("lambda schedule must be nonempty and strictly decreasing");
    }
    if (gap && s.back() <= 0.0) throw ConfigError("'gap_schedule' entries must be positive");
  }
  if (c.command == "converge") {
    if (!doc.contains("grids")) throw ConfigError("converge needs 'grids'");
    const Json& g = doc.at("grids");
    if (!g.is_array()) throw ConfigError("'grids' must be an array of node counts");
    for (const auto& x : g) {
      if (!x.is_number_integer()) throw ConfigError("'grids' must contain integers");
      c.grids.push_back(x.get<int>());
    }
    if (c.grids.size() < 3) throw ConfigError("'grids' needs at least 3 nested grids");
  }
  if (c.command == "multi") {
    if (!doc.contains("targets")) throw ConfigError("multi needs 'targets'");
    c.targets = get_numbers(doc, "targets");
    if (c.targets.empty() || c.targets.size() > 3) throw ConfigError("'targets' needs 1 to 3 values");
    for (std::size_t i = 1; i < c.targets.size(); ++i) {
      if (!(c.targets[i] > c.targets[i - 1])) {
        throw ConfigError("'targets' must be strictly increasing");
      }
    }
    if (doc.contains("exponent_mode")) {
      const auto mode = get<std::string>(doc, "exponent_mode");
      if (mode == "matched") {
        c.exponent_mode = ExponentMode::matched;
      } else if (mode == "literal") {
        c.exponent_mode = ExponentMode::literal;
      } else {
        throw ConfigError("'exponent_mode' must be 'matched' or 'literal'");
      }
    }
  }

  const bool stochastic = c.q0.stochastic() || (c.command == "sweep-q0" && c.direction.stochastic()) ||
                          c.multistart > 0 || c.starts > 1;
  if (stochastic && !c.seed) {
    throw ConfigError("a seed is required for random potentials and multi-start runs");
  }
  apply_defaults(c);
  // Sample once so family parameters and csv inputs are checked up front.
  sample_potential(c.q0, grid, c.seed);
  if (c.command == "sweep-q0") {
    sample_potential(c.direction, grid, c.seed ? std::optional(*c.seed + 1) : std::nullopt);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_json(path));
}

Json to_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["dim"] = c.grid.dim;
  Json n = Json::array(), ext = Json::array();
  for (int a = 0; a < c.grid.dim; ++a) {
    n.push_back(c.grid.n[a]);
    ext.push_back({c.grid.extents[a].first, c.grid.extents[a].second});
  }
  j["n"] = n;
  j["extents"] = ext;
  j["q0"] = potential_json(c.q0);
  j["p"] = c.p;
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["tol"] = c.tol;
  j["maxit"] = c.maxit;
  j["eig_tol"] = c.eig_tol;
  j["eig_maxit"] = c.eig_maxit;
  if (c.lambda) j["lambda"] = *c.lambda;
  if (c.lambda_offset) j["lambda_offset"] = *c.lambda_offset;
  if (c.command == "forward") j["multistart"] = c.multistart;
  if (c.command == "crosscheck") {
    j["starts"] = c.starts;
    j["start_amplitude"] = c.start_amplitude;
  }
  if (c.command == "sweep-q0") {
    j["direction"] = potential_json(c.direction);
    j["deltas"] = c.deltas;
  }
  if (!c.lambda_schedule.empty()) j["lambda_schedule"] = c.lambda_schedule;
  if (!c.gap_schedule.empty()) j["gap_schedule"] = c.gap_schedule;
  if (c.command == "converge") j["grids"] = c.grids;
  if (c.command == "multi") {
    j["targets"] = c.targets;
    j["exponent_mode"] = to_string(c.exponent_mode);
  }
  j["output_dir"] = c.output_dir;
  return j;
}

std::string config_hash(const RunConfig& c) {
  Json j = to_json(c);
  // Where artifacts land does not change what is computed.
  j.erase("output_dir");
  return hex64(fnv1a64(j.dump()));
}

std::string resolve_output_dir(const RunConfig& c) {
  const std::filesystem::path dir(c.output_dir);
  const char* root = std::getenv(kOutputRootEnv);
  if (root && *root && dir.is_relative()) return (std::filesystem::path(root) / dir).string();
  return dir.string();
}

}  // namespace invspec::cli
