// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Command-line driver. Flags override values from --config; --set takes any
// config key as key=JSON.

#include "invspec/cli/run.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

using invspec::cli::Json;

struct Flags {
  std::string config;
  std::optional<int> dim;
  std::vector<int> n;
  std::string q0;
  std::optional<double> p, lambda, lambda_offset, tol, eig_tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> maxit;
  std::string out;
  std::vector<std::string> set;
};

void add_flags(CLI::App* app, Flags& f) {
  app->add_option("-c,--config", f.config, "JSON config or manifest file");
  app->add_option("--dim", f.dim, "Spatial dimension (1 or 2)");
  app->add_option("--n", f.n, "Interior nodes per axis");
  app->add_option("--q0", f.q0, "Potential: number, family name or JSON object");
  app->add_option("--p", f.p, "L^p exponent");
  app->add_option("--lambda", f.lambda, "Target eigenvalue");
  app->add_option("--lambda-offset", f.lambda_offset, "Target as lambda_1(q0) + offset");
  app->add_option("--seed", f.seed, "RNG seed");
  app->add_option("--tol", f.tol, "Primary solver tolerance");
  app->add_option("--maxit", f.maxit, "Primary solver iteration cap");
  app->add_option("--eig-tol", f.eig_tol, "Eigensolver residual tolerance");
  app->add_option("-o,--out", f.out, "Output directory");
  app->add_option("--set", f.set, "Override any config key: key=JSON");
}

Json merged_config(const Flags& f, const std::string& command) {
  Json doc = f.config.empty() ? Json::object() : invspec::cli::read_json(f.config);
  if (doc.contains("tool") && doc.contains("config")) doc = Json(doc["config"]);
  if (!doc.is_object()) throw invspec::ConfigError("config must be a JSON object");
  if (!command.empty()) {
    if (doc.contains("command") && doc["command"] != command) {
      throw invspec::ConfigError("config command '" + doc["command"].get<std::string>() +
                                 "' does not match subcommand '" + command + "'");
    }
    doc["command"] = command;
  }
  if (f.dim) doc["dim"] = *f.dim;
  if (f.n.size() == 1) doc["n"] = f.n[0];
  if (f.n.size() > 1) doc["n"] = f.n;
  if (!f.q0.empty()) {
    try {
      doc["q0"] = Json::parse(f.q0);
    } catch (const nlohmann::json::exception&) {
      doc["q0"] = f.q0;  // bare family name
    }
  }
  if (f.p) doc["p"] = *f.p;
  if (f.lambda) doc["lambda"] = *f.lambda;
  if (f.lambda_offset) doc["lambda_offset"] = *f.lambda_offset;
  if (f.lambda && f.lambda_offset) throw invspec::ConfigError("give --lambda or --lambda-offset, not both");
  if (f.lambda) doc.erase("lambda_offset");
  if (f.lambda_offset) doc.erase("lambda");
  if (f.seed) doc["seed"] = *f.seed;
  if (f.tol) doc["tol"] = *f.tol;
  if (f.maxit) doc["maxit"] = *f.maxit;
  if (f.eig_tol) doc["eig_tol"] = *f.eig_tol;
  if (!f.out.empty()) doc["output_dir"] = f.out;
  for (const auto& kv : f.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw invspec::ConfigError("--set expects key=JSON, got '" + kv + "'");
    try {
      doc[kv.substr(0, eq)] = Json::parse(kv.substr(eq + 1));
    } catch (const nlohmann::json::exception&) {
      throw invspec::ConfigError("--set value for '" + kv.substr(0, eq) + "' is not valid JSON");
    }
  }
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse optimization spectral problem for -Laplace + q with Dirichlet conditions"};
  app.set_version_flag("--version", std::string(invspec::cli::kToolVersion));
  app.require_subcommand(1);

  Flags flags;
  std::string chosen;
  auto* rerun = app.add_subcommand("run", "Run the command named in --config (config or manifest)");
  add_flags(rerun, flags);
  rerun->callback([&] { chosen = ""; });
  for (const auto& name : invspec::cli::commands()) {
    auto* sub = app.add_subcommand(name, "Run '" + name + "'");
    add_flags(sub, flags);
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : invspec::cli::kConfigError;
  }

  invspec::cli::RunConfig config;
  try {
    config = invspec::cli::parse_config(merged_config(flags, chosen));
  } catch (const invspec::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return invspec::cli::kConfigError;
  }
  return invspec::cli::run(config, std::cerr);
}
