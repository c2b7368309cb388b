// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/linops.hpp"
#include "oracles/dense_eigen.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace invspec;
using testing::kPi;

namespace {

std::vector<double> to_std(const Field& f) { return {f.values.data(), f.values.data() + f.size()}; }

// Dense oracle principal pair, normalized to the quadrature L2 norm with a
// positive mean.
std::pair<double, Vector> dense_principal(const Field& q) {
  const Grid& g = q.grid;
  const int nx = g.n(0), ny = g.dim() == 2 ? g.n(1) : 1;
  const auto dec = oracle::jacobi_eigen(oracle::schrodinger_matrix(
      nx, ny, g.spacing(0), g.dim() == 2 ? g.spacing(1) : 1.0, to_std(q)));
  Vector v = Eigen::Map<const Vector>(dec.vectors[0].data(), nx * ny);
  if (v.sum() < 0) v = -v;
  v /= std::sqrt(g.weight() * v.squaredNorm());
  return {dec.values[0], v};
}

}  // namespace

TEST_CASE("apply: sin(pi x) is a discrete eigenvector") {
  // Normwise relative error; the 1/h^2 stencil amplifies rounding, so the
  // grid is kept coarse enough for 1e-12 to sit above that floor.
  const Grid g = unit_grid(1, 63);
  const SchrodingerOperator op{Field(g)};
  const Field f = Field::sample(g, [](double x, double) { return std::sin(kPi * x); });
  const Field af = apply(op, f);
  const double mu = oracle::stencil_lambda1(g.spacing(0));
  CHECK(max_abs(af - mu * f) <= 1e-12 * mu * max_abs(f));
}

TEST_CASE("apply: constant potential shifts exactly; zero maps to zero") {
  const Grid g = unit_grid(2, 9);
  const Field f = testing::random_field(g, 4);
  const Field a0 = apply(SchrodingerOperator{Field(g)}, f);
  const Field ac = apply(SchrodingerOperator{Field::constant(g, 2.5)}, f);
  CHECK(max_abs(ac - (a0 + 2.5 * f)) <= 1e-12);
  CHECK(max_abs(apply(SchrodingerOperator{Field(g)}, Field(g))) == 0.0);
}

TEST_CASE("apply matches the independently assembled dense stencil") {
  const Grid g = build_grid(2, {{{0.0, 2.0}, {0.0, 1.0}}}, {7, 5});
  const Field q = testing::random_field(g, 12, -5.0, 5.0);
  const Field f = testing::random_field(g, 13);
  const auto dense = oracle::schrodinger_matrix(7, 5, g.spacing(0), g.spacing(1), to_std(q));
  const Field af = apply(SchrodingerOperator{q}, f);
  for (int i = 0; i < 35; ++i) {
    double s = 0.0;
    for (int j = 0; j < 35; ++j) s += dense(i, j) * f[j];
    CHECK(af[i] == doctest::Approx(s).epsilon(1e-13));
  }
}

TEST_CASE("apply: symmetric and A + shift positive definite") {
  for (int dim : {1, 2}) {
    const Grid g = unit_grid(dim, dim == 1 ? 100 : 15);
    const SchrodingerOperator op{testing::random_field(g, 77, -20.0, 5.0)};
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Field f = testing::random_field(g, 1000 + s);
      const Field h = testing::random_field(g, 2000 + s);
      const double lhs = inner_product(apply(op, f), h);
      const double rhs = inner_product(f, apply(op, h));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * l2_norm(f) * l2_norm(h) * (1.0 + std::abs(lhs)));
      CHECK(inner_product(apply(op, f) + op.shift * f, f) > 0.0);
    }
  }
}

TEST_CASE("assemble agrees with apply") {
  const Grid g = unit_grid(2, 6);
  const SchrodingerOperator op{testing::random_field(g, 5)};
  const Field f = testing::random_field(g, 6);
  const Vector a = assemble(op, 1.5) * f.values;
  Vector b(f.size());
  apply(op, f.values, b, 1.5);
  CHECK((a - b).norm() <= 1e-12 * b.norm());
}

TEST_CASE("gershgorin_shift examples") {
  const Grid g = unit_grid(1, 5);
  CHECK(gershgorin_shift(Field(g)) == 1.0);
  Field q = Field::constant(g, 4.0);
  q[2] = -5.0;
  CHECK(gershgorin_shift(q) == 6.0);
  CHECK(gershgorin_shift(Field::constant(g, 3.0)) == 1.0);
}

TEST_CASE("cg_solve: manufactured solution, zero rhs, indefinite operator") {
  // Well-conditioned operator (condition number below 3) so the residual
  // bound transfers to the error.
  const Grid g = unit_grid(1, 50);
  const SchrodingerOperator op{testing::random_field(g, 9, 1e4, 2e4)};
  const Field xstar = testing::random_field(g, 10);
  const Field b = apply(op, xstar);
  const double tol = 1e-10;
  const Field x = cg_solve(op, b, tol, 5000);
  CHECK(l2_norm(apply(op, x) - b) <= tol * l2_norm(b));
  CHECK(l2_norm(x - xstar) <= 10.0 * tol * l2_norm(xstar));
  CHECK(max_abs(cg_solve(op, Field(g), tol, 10)) == 0.0);

  const SchrodingerOperator bad{Field::constant(g, -1e6)};
  CHECK_THROWS_AS(cg_solve(bad, b, tol, 5000, 0.0), ConvergenceError);
  const SchrodingerOperator slow{Field(unit_grid(1, 500))};
  CHECK_THROWS_AS(cg_solve(slow, Field::constant(slow.grid, 1.0), 1e-14, 2), ConvergenceError);
}

TEST_CASE("smallest_eigenpair: closed form in 1D, n = 1023") {
  const Grid g = unit_grid(1, 1023);
  const Eigenpair e = smallest_eigenpair(SchrodingerOperator{Field(g)}, 1e-8, 2000);
  const double exact = oracle::stencil_lambda1(g.spacing(0));
  CHECK(std::abs(e.lambda - exact) <= 1e-10 * exact);
  CHECK(std::abs(e.lambda - kPi * kPi) <= 8e-6);
  CHECK(e.report.residual <= 1e-8);
  CHECK(e.phi.min() > 0.0);
  CHECK(inner_product(e.phi, e.phi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("smallest_eigenpair: 2D, n = 63^2") {
  const Grid g = unit_grid(2, 63);
  const Eigenpair e = smallest_eigenpair(SchrodingerOperator{Field(g)}, 1e-8, 2000);
  CHECK(std::abs(e.lambda - 2 * kPi * kPi) <= 1e-3 * 2 * kPi * kPi);
  CHECK(std::abs(e.lambda - 2 * oracle::stencil_lambda1(g.spacing(0))) <= 1e-9 * e.lambda);
}

TEST_CASE("smallest_eigenpair: constant potential shifts the eigenvalue") {
  const Grid g = unit_grid(1, 127);
  const double l0 = smallest_eigenpair(SchrodingerOperator{Field(g)}, 1e-9, 2000).lambda;
  for (double c : {-30.0, 7.5}) {
    const double lc = smallest_eigenpair(SchrodingerOperator{Field::constant(g, c)}, 1e-9, 2000).lambda;
    CHECK(std::abs(lc - (l0 + c)) <= 1e-8);
  }
}

TEST_CASE("smallest_eigenpair: dense oracle equivalence") {
  for (int dim : {1, 2}) {
    const Grid g = unit_grid(dim, dim == 1 ? 64 : 12);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Field q = testing::random_field(g, seed * 31 + dim, -50.0, 50.0);
      const Eigenpair e = smallest_eigenpair(SchrodingerOperator{q}, 1e-10, 4000);
      const auto [lam, vec] = dense_principal(q);
      CHECK(std::abs(e.lambda - lam) <= 1e-8);
      CHECK((e.phi.values - vec).norm() <= 1e-6);
    }
  }
}

TEST_CASE("smallest_eigenpair: shift equivariance of the eigenfunction") {
  const Grid g = unit_grid(1, 100);
  const Field q = testing::smooth_field(g, 3, 20.0);
  const Eigenpair a = smallest_eigenpair(SchrodingerOperator{q}, 1e-10, 2000);
  const Eigenpair b = smallest_eigenpair(SchrodingerOperator{q + 4.0}, 1e-10, 2000);
  CHECK(std::abs(b.lambda - a.lambda - 4.0) <= 1e-9);
  CHECK(max_abs(a.phi - b.phi) <= 1e-7);
}

TEST_CASE("smallest_eigenpair: deterministic") {
  const Grid g = unit_grid(2, 10);
  const Field q = testing::random_field(g, 8, -10, 10);
  const Eigenpair a = smallest_eigenpair(SchrodingerOperator{q}, 1e-9, 2000);
  const Eigenpair b = smallest_eigenpair(SchrodingerOperator{q}, 1e-9, 2000);
  CHECK(a.lambda == b.lambda);
  CHECK((a.phi.values - b.phi.values).norm() == 0.0);
}

TEST_CASE("smallest_eigenpair: iteration cap is reported") {
  const Grid g = unit_grid(1, 255);
  CHECK_THROWS_AS(smallest_eigenpair(SchrodingerOperator{Field(g)}, 1e-12, 1), ConvergenceError);
}

TEST_CASE("rayleigh_quotient: eigenvector, variational bound, homogeneity") {
  const Grid g = unit_grid(1, 64);
  const Field q = testing::smooth_field(g, 21, 30.0);
  const SchrodingerOperator op{q};
  const double tol = 1e-9;
  const Eigenpair e = smallest_eigenpair(op, tol, 2000);
  CHECK(std::abs(rayleigh_quotient(op, e.phi) - e.lambda) <= tol);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Field f = testing::random_field(g, 500 + s);
    const double r = rayleigh_quotient(op, f);
    CHECK(r >= e.lambda - 10 * tol);
    CHECK(std::abs(rayleigh_quotient(op, 7.0 * f) - r) <= 1e-14 * std::abs(r));
  }
  CHECK_THROWS_AS(rayleigh_quotient(op, Field(g)), Error);
}

TEST_CASE("lowest_eigenpairs: matches the dense spectrum") {
  const Grid g = unit_grid(1, 40);
  const Field q = testing::smooth_field(g, 2, 10.0);
  const auto pairs = lowest_eigenpairs(SchrodingerOperator{q}, 3, 1e-10, 4000);
  const int n = 40;
  const auto dec = oracle::jacobi_eigen(oracle::schrodinger_matrix(n, 1, g.spacing(0), 1.0, to_std(q)));
  REQUIRE(pairs.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(pairs[i].lambda - dec.values[i]) <= 1e-8);
  CHECK(std::abs(inner_product(pairs[0].phi, pairs[1].phi)) <= 1e-8);
}
