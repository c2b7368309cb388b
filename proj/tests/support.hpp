// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "invspec/mesh.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace testing {

inline constexpr double kPi = std::numbers::pi;

/// Independent uniform values in [lo, hi).
inline invspec::Field random_field(const invspec::Grid& g, std::uint64_t seed, double lo = -1.0,
                                   double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  invspec::Field f(g);
  for (Eigen::Index k = 0; k < f.size(); ++k) f[k] = u(rng);
  return f;
}

/// Low-frequency random sine series with amplitude `amp`.
inline invspec::Field smooth_field(const invspec::Grid& g, std::uint64_t seed, double amp = 1.0,
                                   int modes = 4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(modes * modes));
  std::vector<double> b(static_cast<std::size_t>(modes));
  for (auto& c : a) c = u(rng);
  for (auto& c : b) c = u(rng);
  return invspec::Field::sample(g, [&](double x, double y) {
    double s = 0.0;
    for (int k = 1; k <= modes; ++k) {
      if (g.dim() == 1) {
        s += b[k - 1] * std::cos(k * kPi * x) / k;
      } else {
        for (int l = 1; l <= modes; ++l) {
          s += a[(k - 1) * modes + l - 1] * std::cos(k * kPi * x) * std::cos(l * kPi * y) / (k + l);
        }
      }
    }
    return amp * s;
  });
}

}  // namespace testing
