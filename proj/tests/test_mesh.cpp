// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/errors.hpp"
#include "invspec/mesh.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace invspec;
using testing::kPi;

TEST_CASE("build_grid: 1D spacing and weight") {
  const Grid g = build_grid(1, {{{0.0, 1.0}, {0.0, 0.0}}}, {1023, 0});
  CHECK(g.dim() == 1);
  CHECK(g.size() == 1023);
  CHECK(g.spacing(0) == doctest::Approx(1.0 / 1024).epsilon(1e-15));
  CHECK(g.weight() == doctest::Approx(1.0 / 1024).epsilon(1e-15));
}

TEST_CASE("build_grid: 2D node count and weight") {
  const Grid g = build_grid(2, {{{0.0, 1.0}, {0.0, 1.0}}}, {63, 63});
  CHECK(g.size() == 3969);
  CHECK(g.weight() == doctest::Approx(1.0 / 4096).epsilon(1e-15));
  CHECK(g.coordinate(g.index(0, 1), 1) == doctest::Approx(2.0 / 64));
  CHECK(g.coordinate(g.index(5, 0), 0) == doctest::Approx(6.0 / 64));
}

TEST_CASE("build_grid: invalid input") {
  CHECK_THROWS_AS(build_grid(1, {{{0.0, 0.0}, {0.0, 0.0}}}, {100, 0}), ConfigError);
  CHECK_THROWS_AS(build_grid(1, {{{0.0, 1.0}, {0.0, 0.0}}}, {2, 0}), ConfigError);
  CHECK_THROWS_AS(build_grid(2, {{{0.0, 1.0}, {1.0, 0.5}}}, {10, 10}), ConfigError);
  CHECK_THROWS_AS(build_grid(3, {{{0.0, 1.0}, {0.0, 1.0}}}, {10, 10}), ConfigError);
}

TEST_CASE("inner_product: quadrature examples") {
  const Grid g = unit_grid(1, 1023);
  const Field one = Field::constant(g, 1.0);
  CHECK(inner_product(one, one) == doctest::Approx(1023.0 / 1024).epsilon(1e-14));

  // Antisymmetric product about the midpoint integrates to zero.
  const Field f = Field::sample(g, [](double x, double) { return x - 0.5; });
  CHECK(std::abs(inner_product(f, one)) < 1e-14);

  const Field s = Field::sample(g, [](double x, double) { return std::sin(kPi * x); });
  CHECK(std::abs(inner_product(s, s) - 0.5) <= 1e-3);
}

TEST_CASE("inner_product: symmetric, bilinear, positive") {
  const Grid g = unit_grid(2, 17);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Field f = testing::random_field(g, seed);
    const Field h = testing::random_field(g, seed + 100);
    const Field k = testing::random_field(g, seed + 200);
    const double fh = inner_product(f, h);
    CHECK(std::abs(fh - inner_product(h, f)) <= 1e-14 * std::abs(fh) + 1e-300);
    const double lin = inner_product(lincomb(2.0, f, -3.0, k), h);
    const double ref = 2.0 * fh - 3.0 * inner_product(k, h);
    CHECK(std::abs(lin - ref) <= 1e-14 * (std::abs(2.0 * fh) + std::abs(3.0 * inner_product(k, h))));
    CHECK(inner_product(f, f) > 0.0);
  }
}

TEST_CASE("inner_product: grid mismatch") {
  CHECK_THROWS_AS(inner_product(Field(unit_grid(1, 10)), Field(unit_grid(1, 11))), GridMismatch);
}

TEST_CASE("inner_product: quadrature error is second order") {
  // The integral of x(1-x) e^x over (0,1) is 3 - e; the integrand vanishes
  // at the boundary with nonzero slope, so the rule is exactly second order.
  std::vector<double> h, err;
  for (int n : {31, 63, 127}) {
    const Grid g = unit_grid(1, n);
    const Field f = Field::sample(g, [](double x, double) { return x * (1 - x); });
    const Field s = Field::sample(g, [](double x, double) { return std::exp(x); });
    h.push_back(g.spacing(0));
    err.push_back(std::abs(inner_product(f, s) - (3.0 - std::exp(1.0))));
  }
  CHECK(err[1] < err[0]);
  CHECK(err[2] < err[1]);
  CHECK(std::log(err[0] / err[2]) / std::log(h[0] / h[2]) >= 1.9);
}

TEST_CASE("lp_norm: examples") {
  const Grid g = unit_grid(1, 1023);
  CHECK(lp_norm(Field::constant(g, 2.0), 2.0) ==
        doctest::Approx(2.0 * std::sqrt(1023.0 / 1024)).epsilon(1e-14));
  CHECK(lp_norm(Field(g), 3.0) == 0.0);
  const Field x = Field::sample(g, [](double x, double) { return x; });
  CHECK(std::abs(lp_norm(x, 3.0) - std::cbrt(0.25)) <= 1e-3);
  CHECK_THROWS_AS(lp_norm(x, 0.5), ConfigError);
}

TEST_CASE("lp_norm: triangle inequality and homogeneity") {
  const Grid g = unit_grid(1, 200);
  for (double p : {1.0, 2.0, 3.0, 5.0}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Field f = testing::random_field(g, seed);
      const Field h = testing::random_field(g, seed + 50);
      const double nf = lp_norm(f, p), nh = lp_norm(h, p);
      CHECK(lp_norm(f + h, p) <= (nf + nh) * (1 + 1e-12));
      CHECK(std::abs(lp_norm(-3.5 * f, p) - 3.5 * nf) <= 1e-12 * 3.5 * nf);
    }
  }
}

TEST_CASE("map_pointwise and lincomb") {
  const Grid g = unit_grid(1, 10);
  const Field three = Field::constant(g, 3.0);
  CHECK(max_abs(map_pointwise(three, [](double x) { return x * x; }) + (-9.0)) == 0.0);
  CHECK(max_abs(lincomb(1.0, three, -1.0, three)) == 0.0);
  const double p = 2.0;
  const Field four = Field::constant(g, 4.0);
  CHECK(max_abs(map_pointwise(four, [p](double x) { return std::pow(x, 2.0 / (p - 1)); }) + (-16.0)) == 0.0);
}

TEST_CASE("map_pointwise: non-finite output names the node") {
  const Grid g = unit_grid(1, 10);
  Field f = Field::constant(g, 1.0);
  f[4] = -1.0;
  try {
    map_pointwise(f, [](double x) { return std::sqrt(x); });
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(e.node() == 4);
  }
}

TEST_CASE("restrict_to_coarse: injection") {
  const Grid fine = unit_grid(1, 1023);
  const Grid coarse = unit_grid(1, 511);
  const Field f = Field::sample(fine, [](double x, double) { return std::sin(3 * x) + x * x; });
  const Field c = restrict_to_coarse(f, coarse);
  for (int i = 0; i < 511; ++i) CHECK(c[i] == f[2 * i + 1]);
  const Field k = restrict_to_coarse(Field::constant(fine, 2.5), coarse);
  CHECK(k.min() == 2.5);
  CHECK(k.max() == 2.5);
  CHECK_THROWS_AS(restrict_to_coarse(f, unit_grid(1, 500)), ConfigError);
}

TEST_CASE("restrict_to_coarse: 2D injection") {
  const Grid fine = unit_grid(2, 15);
  const Grid coarse = unit_grid(2, 7);
  const Field f = testing::random_field(fine, 3);
  const Field c = restrict_to_coarse(f, coarse);
  for (int j = 0; j < 7; ++j)
    for (int i = 0; i < 7; ++i) CHECK(c[coarse.index(i, j)] == f[fine.index(2 * i + 1, 2 * j + 1)]);
}

TEST_CASE("restrict_to_coarse: L2 norm difference is O(h)") {
  const Grid fine = unit_grid(1, 1023);
  const Grid coarse = unit_grid(1, 255);
  const Field f = Field::sample(fine, [](double x, double) { return std::exp(x) * std::sin(kPi * x); });
  const Field c = restrict_to_coarse(f, coarse);
  CHECK(std::abs(l2_norm(c) - l2_norm(f)) <= 2.0 * coarse.spacing(0));
}

TEST_CASE("field csv round trip") {
  const Grid g = build_grid(2, {{{-1.0, 2.0}, {0.0, 0.5}}}, {5, 4});
  const Field f = testing::random_field(g, 9);
  std::stringstream ss;
  write_field_csv(ss, f);
  const std::string text = ss.str();
  CHECK(text.rfind("# 2, 5x4, ", 0) == 0);
  const Field r = read_field_csv(ss);
  CHECK(r.grid == g);
  CHECK(max_abs(r - f) == 0.0);
}

TEST_CASE("field csv: malformed input") {
  std::stringstream bad("# 1, 5, 0:1\n1\n2\n");
  CHECK_THROWS_AS(read_field_csv(bad), ConfigError);
}
