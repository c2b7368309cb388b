// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "invspec/cli/potentials.hpp"
#include "invspec/cli/report.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace invspec::cli {

inline constexpr const char* kToolName = "invspec";
inline constexpr const char* kToolVersion = "1.0.0";
/// Environment variable that overrides the root of relative output directories.
inline constexpr const char* kOutputRootEnv = "INVSPEC_OUTPUT_ROOT";

const std::vector<std::string>& commands();

struct GridSpec {
  int dim = 1;
  std::array<int, 2> n{255, 255};
  std::array<std::pair<double, double>, 2> extents{{{0.0, 1.0}, {0.0, 1.0}}};

  Grid build() const;
  /// Same extents with `n` interior nodes per axis.
  Grid build(int n_per_axis) const;
};

/// Fully validated run description. Every default is materialized, so
/// to_json(config) echoes exactly what ran.
struct RunConfig {
  std::string command;
  GridSpec grid;
  PotentialDescriptor q0;
  double p = 2.0;
  /// Target eigenvalue: `lambda`, or lambda_1(q0) + `lambda_offset`.
  std::optional<double> lambda;
  std::optional<double> lambda_offset;
  std::optional<std::uint64_t> seed;

  double tol = 0.0;      // primary solver tolerance, per-command default
  int maxit = 0;         // primary solver iteration cap, per-command default
  double eig_tol = 0.0;  // eigensolver residual tolerance
  int eig_maxit = 2000;

  // forward
  int multistart = 0;
  // crosscheck
  int starts = 1;
  double start_amplitude = 2.0;
  // sweep-q0
  PotentialDescriptor direction;
  std::vector<double> deltas;
  // sweep-lambda: absolute schedule or gaps above lambda_1(q0)
  std::vector<double> lambda_schedule;
  std::vector<double> gap_schedule;
  // converge
  std::vector<int> grids;
  // multi
  std::vector<double> targets;
  ExponentMode exponent_mode = ExponentMode::matched;

  std::string output_dir = "invspec-out";
};

/// Strict parse: unknown keys, missing required keys and inadmissible values
/// raise ConfigError. A manifest document is accepted in place of a config.
RunConfig parse_config(const Json& doc);
RunConfig load_config(const std::string& path);
Json to_json(const RunConfig& c);
/// FNV-1a of the canonical echo.
std::string config_hash(const RunConfig& c);
/// Output directory after applying the output-root environment override.
std::string resolve_output_dir(const RunConfig& c);

}  // namespace invspec::cli
