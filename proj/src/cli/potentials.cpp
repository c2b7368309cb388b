// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/cli/potentials.hpp"

#include "invspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace invspec::cli {

const std::vector<std::string>& potential_families() {
  static const std::vector<std::string> families = {
      "constant", "step", "gaussian_well", "fourier_random", "log_singular", "csv_file"};
  return families;
}

namespace {

// Smooth random sine series, amplitude decaying like 1/k so the sample stays
// well resolved on desk-scale grids.
Field fourier_random(const PotentialDescriptor& d, const Grid& g, std::uint64_t seed) {
  if (d.modes < 1) throw ConfigError("fourier_random: modes must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const int ky_max = g.dim() == 2 ? d.modes : 1;
  std::vector<double> a(static_cast<std::size_t>(d.modes * ky_max));
  for (auto& c : a) c = coef(rng);
  const double pi = std::numbers::pi;
  const double lx = g.upper(0) - g.lower(0);
  const double ly = g.dim() == 2 ? g.upper(1) - g.lower(1) : 1.0;
  return Field::sample(g, [&](double x, double y) {
    double s = 0.0;
    for (int kx = 1; kx <= d.modes; ++kx) {
      const double sx = std::sin(kx * pi * (x - g.lower(0)) / lx);
      for (int ky = 1; ky <= ky_max; ++ky) {
        const double sy = g.dim() == 2 ? std::sin(ky * pi * (y - g.lower(1)) / ly) : 1.0;
        s += a[static_cast<std::size_t>((kx - 1) * ky_max + ky - 1)] * sx * sy / (kx + ky - 1);
      }
    }
    return d.amplitude * s;
  });
}

}  // namespace

Field sample_potential(const PotentialDescriptor& d, const Grid& g,
                       std::optional<std::uint64_t> seed) {
  const bool two = g.dim() == 2;
  if (d.family == "constant") return Field::constant(g, d.value);
  if (d.family == "step") {
    return Field::sample(g, [&](double x, double) { return x < d.position ? d.left : d.right; });
  }
  if (d.family == "gaussian_well") {
    if (d.width <= 0.0) throw ConfigError("gaussian_well: width must be positive");
    if (!d.center.empty() && static_cast<int>(d.center.size()) != g.dim()) {
      throw ConfigError("gaussian_well: center needs one coordinate per axis");
    }
    const double cx = d.center.empty() ? 0.5 * (g.lower(0) + g.upper(0)) : d.center[0];
    const double cy = !two ? 0.0 : d.center.empty() ? 0.5 * (g.lower(1) + g.upper(1)) : d.center[1];
    return Field::sample(g, [&](double x, double y) {
      const double r2 = (x - cx) * (x - cx) + (two ? (y - cy) * (y - cy) : 0.0);
      return -d.depth * std::exp(-r2 / (2.0 * d.width * d.width));
    });
  }
  if (d.family == "fourier_random") {
    if (!seed) throw ConfigError("fourier_random potential requires a seed");
    return fourier_random(d, g, *seed);
  }
  if (d.family == "log_singular") {
    return Field::sample(g, [&](double x, double y) {
      double dist = std::min(x - g.lower(0), g.upper(0) - x);
      if (two) dist = std::min({dist, y - g.lower(1), g.upper(1) - y});
      return -d.scale * std::log(dist);
    });
  }
  if (d.family == "csv_file") {
    if (d.path.empty()) throw ConfigError("csv_file potential requires a path");
    Field f = read_field_csv(d.path);
    if (!(f.grid == g)) throw ConfigError("csv_file potential '" + d.path + "' does not match the grid");
    return f;
  }
  throw ConfigError("unknown potential family '" + d.family + "'");
}

}  // namespace invspec::cli
