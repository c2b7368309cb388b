// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/crosscheck.hpp"
#include "invspec/inverse.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace invspec;
using testing::kPi;

namespace {

const EigenOptions kTight{1e-10, 4000};

}  // namespace

TEST_CASE("merit_and_gradient: feasible constant-shift start") {
  const Grid g = unit_grid(1, 128);
  const Field q0 = testing::smooth_field(g, 1, 10.0);
  const double lambda = principal_eigenpair(q0).lambda + 7.0;
  const Field start = feasible_start(q0, lambda, Field(g));
  CHECK(max_abs(start - (q0 + 7.0)) <= 1e-8);
  const MeritEvaluation ev = merit_and_gradient(start, q0, lambda, 2.0, 10.0, 0.0);
  CHECK(std::abs(ev.violation) <= 1e-8);
}

TEST_CASE("merit_and_gradient: directional derivative matches central differences") {
  const Grid g = unit_grid(1, 128);
  const Field q0 = testing::smooth_field(g, 2, 10.0);
  const Field q = q0 + testing::smooth_field(g, 3, 5.0) + 3.0;
  const double lambda = principal_eigenpair(q0).lambda + 10.0;
  for (double p : {2.0, 3.0}) {
    const double rho = 10.0, mu = -4.0;
    const MeritEvaluation ev = merit_and_gradient(q, q0, lambda, p, rho, mu, kTight);
    const Field h = testing::smooth_field(g, 4, 1.0);
    const double analytic = ev.gradient.values.dot(h.values);
    const double eps = 1e-4;
    const double fd = (merit_and_gradient(q + eps * h, q0, lambda, p, rho, mu, kTight).merit -
                       merit_and_gradient(q + (-eps) * h, q0, lambda, p, rho, mu, kTight).merit) /
                      (2 * eps);
    CHECK(std::abs(analytic - fd) <= 1e-5 * std::abs(fd));
  }
  CHECK_THROWS_AS(merit_and_gradient(q, q0, lambda, 1.5, 1.0, 0.0), ConfigError);
}

TEST_CASE("merit_and_gradient: stationarity at the closed-form optimum") {
  const Grid g = unit_grid(1, 255);
  const double lambda = 2 * kPi * kPi;
  const Field q0(g);
  for (double p : {2.0, 3.0}) {
    const InverseResult r = solve_inverse(q0, lambda, p);
    const MeritEvaluation ev = merit_and_gradient(r.q_hat, q0, lambda, p, 0.0, 0.0, kTight);
    // Objective gradient in the L2 metric, projected onto the tangent space.
    const Field gq(g, ev.gradient.values / g.weight());
    CHECK(l2_norm(tangent_project(ev.pair, gq)) <= 1e-6);
  }
}

TEST_CASE("tangent_project: examples") {
  const Grid g = unit_grid(1, 100);
  const SpectralPair pair = principal_eigenpair(testing::smooth_field(g, 5, 10.0));
  const Field phi2 = map_pointwise(pair.phi, [](double x) { return x * x; });
  CHECK(l2_norm(tangent_project(pair, phi2)) <= 1e-12 * l2_norm(phi2));
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Field h = testing::random_field(g, 60 + s);
    const Field t = tangent_project(pair, h);
    CHECK(std::abs(inner_product(phi2, t)) <= 1e-12 * l2_norm(h));
    CHECK(max_abs(tangent_project(pair, t) - t) <= 1e-14 * (1.0 + max_abs(t)));
  }
}

TEST_CASE("augmented_lagrangian_minimize: p = 2 reaches the closed form") {
  const Grid g = unit_grid(1, 255);
  const Field q0(g);
  const double lambda = 2 * kPi * kPi;
  const InverseResult r = solve_inverse(q0, lambda, 2.0);
  const OptState s = augmented_lagrangian_minimize(q0, lambda, 2.0, feasible_start(q0, lambda, Field(g)));
  CHECK(s.converged);
  CHECK(lp_norm(s.q - r.q_hat, 2.0) <= 1e-3);
  CHECK(s.objective >= r.objective - 1e-6);
  CHECK(std::abs(s.lambda1 - lambda) <= 1e-6);
  CHECK(s.projected_gradient_norm <= CrosscheckOptions{}.tol_g);
  // Multiplier relation: 2 (q - q0) = -mu phi^2 at the limit.
  CHECK(stationarity_defect(s, q0, 2.0) <= 1e-3);

  // Merit decreases along accepted steps of one outer iteration.
  for (std::size_t i = 1; i < s.history.size(); ++i) {
    if (s.history[i].outer == s.history[i - 1].outer) {
      CHECK(s.history[i].merit <= s.history[i - 1].merit + 1e-12 * std::abs(s.history[i - 1].merit));
    }
  }
}

TEST_CASE("augmented_lagrangian_minimize: seeded starts agree") {
  const Grid g = unit_grid(1, 127);
  const Field q0 = testing::smooth_field(g, 6, 10.0);
  const double lambda = principal_eigenpair(q0).lambda + 10.0;
  for (double p : {2.0, 3.0}) {
    CrosscheckOptions opts;
    if (p == 3.0) opts.tol_g = 1e-4;
    const double agree = p == 2.0 ? 1e-3 : 5e-3;
    const InverseResult r = solve_inverse(q0, lambda, p);
    std::vector<Field> limits;
    for (std::uint64_t s = 0; s < 2; ++s) {
      const Field start = feasible_start(q0, lambda, testing::smooth_field(g, 70 + s, 3.0));
      limits.push_back(augmented_lagrangian_minimize(q0, lambda, p, start, opts).q);
    }
    CHECK(lp_norm(limits[0] - limits[1], p) <= agree);
    CHECK(lp_norm(limits[0] - r.q_hat, p) <= agree);
  }
}

TEST_CASE("write_history_csv: header and rows") {
  std::ostringstream os;
  write_history_csv(os, {HistoryRow{0, 0, 1.5, -0.25, 0.1, 12, 2.0}});
  const std::string text = os.str();
  CHECK(text.rfind("iteration,objective,violation,step,eigen_iterations,outer,merit\n", 0) == 0);
  CHECK(text.find("0,1.5,-0.25,0.1") != std::string::npos);
}
