// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/spectral.hpp"
#include "oracles/dense_eigen.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace invspec;
using testing::kPi;

namespace {

const EigenOptions kTight{1e-10, 4000};

double central_difference(const Field& q, const Field& h, double eps) {
  return (principal_eigenpair(q + eps * h, kTight).lambda -
          principal_eigenpair(q + (-eps) * h, kTight).lambda) /
         (2.0 * eps);
}

}  // namespace

TEST_CASE("principal_eigenpair: invariants and closed form") {
  const Grid g = unit_grid(1, 1023);
  const SpectralPair s = principal_eigenpair(Field(g));
  CHECK(std::abs(s.lambda - 9.86959) <= 1e-5);
  CHECK(std::abs(inner_product(s.phi, s.phi) - 1.0) <= 1e-12);
  CHECK(s.phi.min() > 0.0);

  const SpectralPair m = principal_eigenpair(Field::constant(g, -kPi * kPi));
  CHECK(std::abs(m.lambda - (oracle::stencil_lambda1(g.spacing(0)) - kPi * kPi)) <= 1e-9);
  CHECK(std::abs(m.lambda) <= 1e-4);
}

TEST_CASE("principal_eigenpair: linear potential against the dense oracle") {
  const Grid g = unit_grid(1, 64);
  const Field q = Field::sample(g, [](double x, double) { return 100.0 * x; });
  std::vector<double> qs(q.values.data(), q.values.data() + q.size());
  const auto dec = oracle::jacobi_eigen(oracle::schrodinger_matrix(64, 1, g.spacing(0), 1.0, qs));
  CHECK(std::abs(principal_eigenpair(q, kTight).lambda - dec.values[0]) <= 1e-8);
}

TEST_CASE("eigenvalue_derivative: constant directions") {
  const Grid g = unit_grid(1, 200);
  const Field q = testing::smooth_field(g, 5, 20.0);
  const SpectralPair pair = principal_eigenpair(q, kTight);
  CHECK(std::abs(eigenvalue_derivative(pair, Field::constant(g, 1.0)) - 1.0) <= 1e-10);
  CHECK(std::abs(eigenvalue_derivative(pair, Field::constant(g, -3.25)) + 3.25) <= 1e-10);
  CHECK(std::abs(eigenvalue_derivative(q, Field::constant(g, 2.0), kTight) - 2.0) <= 1e-10);
}

TEST_CASE("eigenvalue_derivative: positive for nonnegative directions") {
  const Grid g = unit_grid(2, 15);
  const SpectralPair pair = principal_eigenpair(testing::smooth_field(g, 6, 10.0));
  for (std::uint64_t s = 0; s < 10; ++s) {
    Field h = testing::random_field(g, 40 + s, 0.0, 1.0);
    CHECK(eigenvalue_derivative(pair, h) > 0.0);
  }
  Field spike(g);
  spike[g.index(7, 7)] = 1.0;
  CHECK(eigenvalue_derivative(pair, spike) > 0.0);
}

TEST_CASE("eigenvalue_derivative: central differences on n = 256") {
  const Grid g = unit_grid(1, 256);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Field q = testing::smooth_field(g, seed, 30.0);
    const Field h = testing::smooth_field(g, seed + 100, 30.0);
    const double d = eigenvalue_derivative(q, h, kTight);
    CHECK(std::abs(d - central_difference(q, h, 1e-4)) <= 1e-6);
  }
}

TEST_CASE("eigenvalue_derivative: finite-difference error decays like eps^2") {
  const Grid g = unit_grid(1, 256);
  const Field q = testing::smooth_field(g, 11, 30.0);
  const Field h = testing::smooth_field(g, 12, 30.0);
  const double d = eigenvalue_derivative(q, h, kTight);
  std::vector<double> eps{1e-2, 1e-3, 1e-4}, err;
  for (double e : eps) err.push_back(std::abs(central_difference(q, h, e) - d));
  CHECK(std::abs(oracle::loglog_slope(eps, err) - 2.0) <= 0.2);
}

TEST_CASE("concavity_probe: constant difference is the equality case") {
  const Grid g = unit_grid(1, 128);
  const Field q1 = testing::smooth_field(g, 3, 10.0);
  const ConcavityReport r = concavity_probe(q1, q1 + 5.0, 9, kTight);
  CHECK_FALSE(r.nonconstant_difference);
  CHECK(std::abs(r.min_slack) <= 10.0 * kTight.tol);
  CHECK(r.passed);
}

TEST_CASE("concavity_probe: oscillating difference has positive slack") {
  const Grid g = unit_grid(1, 128);
  const Field q2 = Field::sample(g, [](double x, double) { return 50.0 * std::sin(2 * kPi * x); });
  const ConcavityReport r = concavity_probe(Field(g), q2, 1, kTight);
  REQUIRE(r.samples.size() == 1);
  CHECK(r.samples[0].t == 0.5);
  CHECK(r.samples[0].slack > 0.0);
  CHECK(r.passed);
}

TEST_CASE("concavity_slack: endpoints and random pairs") {
  const Grid g = unit_grid(1, 64);
  const Field q1 = testing::random_field(g, 1, -20, 20);
  const Field q2 = testing::random_field(g, 2, -20, 20);
  CHECK(concavity_slack(q1, q2, 0.0) == 0.0);
  CHECK(concavity_slack(q1, q2, 1.0) == 0.0);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ConcavityReport r = concavity_probe(testing::random_field(g, 10 + s, -30, 30),
                                              testing::smooth_field(g, 20 + s, 30.0), 9, kTight);
    CHECK(r.min_slack >= -1e-9);
    CHECK(r.min_slack > 0.0);
    CHECK(r.passed);
  }
  CHECK_THROWS_AS(concavity_probe(q1, q1, 3), ConfigError);
}

TEST_CASE("continuity_probe: examples") {
  const Grid g = unit_grid(1, 128);
  const Field q = testing::smooth_field(g, 8, 10.0);
  const ContinuityReport one = continuity_probe(q, Field::constant(g, 1.0), {1e-1, 1e-2, 0.0}, kTight);
  CHECK(std::abs(one.rows[0].difference - 1e-1) <= 1e-9);
  CHECK(std::abs(one.rows[1].difference - 1e-2) <= 1e-9);
  CHECK(one.rows[2].difference <= 1e-9);
  CHECK(one.passed);

  const ContinuityReport rnd =
      continuity_probe(q, testing::smooth_field(g, 9, 5.0), {1e-1, 1e-2, 1e-3, 1e-4}, kTight);
  CHECK(rnd.passed);
  for (std::size_t i = 0; i < rnd.rows.size(); ++i) {
    CHECK(rnd.rows[i].difference <= rnd.rows[i].envelope + 1e-9);
    if (i > 0) CHECK(rnd.rows[i].difference < rnd.rows[i - 1].difference);
  }
  CHECK_THROWS_AS(continuity_probe(q, q, {1e-2, 1e-1}), ConfigError);
}
