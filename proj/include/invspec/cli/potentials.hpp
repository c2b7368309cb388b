// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "invspec/mesh.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace invspec::cli {

/// Named potential family plus its parameters. Unused parameters keep their
/// defaults and are ignored by the sampler.
struct PotentialDescriptor {
  std::string family = "constant";
  double value = 0.0;             // constant
  double left = 0.0;              // step: value for x < position
  double right = 10.0;            // step: value for x >= position
  double position = 0.5;          // step
  double depth = 50.0;            // gaussian_well
  double width = 0.1;             // gaussian_well
  std::vector<double> center;     // gaussian_well; empty means domain midpoint
  int modes = 6;                  // fourier_random
  double amplitude = 10.0;        // fourier_random
  double scale = 1.0;             // log_singular
  std::string path;               // csv_file

  bool stochastic() const { return family == "fourier_random"; }
};

const std::vector<std::string>& potential_families();

/// Samples the descriptor at the interior nodes of `grid`. `seed` is required
/// for stochastic families.
Field sample_potential(const PotentialDescriptor& d, const Grid& grid,
                       std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace invspec::cli
