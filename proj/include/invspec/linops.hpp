// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "invspec/errors.hpp"
#include "invspec/mesh.hpp"

#include <Eigen/SparseCore>

#include <cmath>
#include <optional>
#include <vector>

namespace invspec {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discrete A(q) = -Delta_h + diag(q) with the 3-point (1D) or 5-point (2D)
/// stencil and zero ghost values outside the grid.
struct SchrodingerOperator {
  Grid grid;
  Field q;
  /// sigma >= 0 with A + sigma I positive definite.
  double shift = 0.0;

  SchrodingerOperator() = default;
  explicit SchrodingerOperator(const Field& potential);
};

struct EigSolveReport {
  int iterations = 0;
  /// Quadrature-weighted l2 norm of A phi - lambda phi with ||phi||_{L2} = 1.
  double residual = 0.0;
  int cg_total_iterations = 0;
};

struct Eigenpair {
  double lambda = 0.0;
  Field phi;
  EigSolveReport report;
};

/// out = (A(q) + extra_shift I) in
void apply(const SchrodingerOperator& op, const Vector& in, Vector& out,
           double extra_shift = 0.0);
Field apply(const SchrodingerOperator& op, const Field& f);

/// max(0, -min q) + 1
double gershgorin_shift(const Field& q);

/// Explicit sparse matrix of A(q) + extra_shift I.
SparseMatrix assemble(const SchrodingerOperator& op, double extra_shift = 0.0);

struct CgResult {
  Vector x;
  int iterations = 0;
  /// Final ||op(x) - b||_2 / ||b||_2.
  double relative_residual = 0.0;
};

/// Conjugate gradients for a symmetric positive definite `op(in, out)`.
/// Stops when ||op(x) - b||_2 <= tol ||b||_2. Throws ConvergenceError when
/// maxit is exceeded or a non-positive curvature p'Ap <= 0 is met.
template <typename ApplyFn>
CgResult cg_solve(const ApplyFn& op, const Vector& b, double tol, int maxit,
                  const Vector* x0 = nullptr) {
  CgResult result;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    result.x = Vector::Zero(b.size());
    return result;
  }
  Vector x = x0 ? *x0 : Vector::Zero(b.size());
  Vector ap(b.size());
  op(x, ap);
  Vector r = b - ap;
  Vector p = r;
  double rr = r.squaredNorm();
  const double target = tol * bnorm;
  int it = 0;
  while (std::sqrt(rr) > target) {
    if (it >= maxit) {
      throw ConvergenceError("cg: iteration cap reached", std::sqrt(rr) / bnorm);
    }
    op(p, ap);
    const double curvature = p.dot(ap);
    if (!(curvature > 0.0)) {
      throw ConvergenceError("cg: breakdown, operator is not positive definite",
                             std::sqrt(rr) / bnorm);
    }
    const double alpha = rr / curvature;
    x.noalias() += alpha * p;
    r.noalias() -= alpha * ap;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
    ++it;
  }
  result.x = std::move(x);
  result.iterations = it;
  result.relative_residual = std::sqrt(rr) / bnorm;
  return result;
}

/// Field-level wrapper solving (A(q) + extra_shift I) x = b.
Field cg_solve(const SchrodingerOperator& op, const Field& b, double tol, int maxit,
               double extra_shift = 0.0);

/// Principal eigenpair by shifted inverse power iteration with inner CG
/// solves. phi is normalized to ||phi||_{L2} = 1 and positive at every node.
/// `start` overrides the all-ones initial vector.
Eigenpair smallest_eigenpair(const SchrodingerOperator& op, double tol, int maxit,
                             const Field* start = nullptr);

/// The `count` lowest eigenpairs by inverse iteration with deflation against
/// the already converged vectors. Only the first is sign-checked for
/// positivity; the others are oriented so their largest entry is positive.
std::vector<Eigenpair> lowest_eigenpairs(const SchrodingerOperator& op, int count,
                                         double tol, int maxit);

/// <A v, v> evaluated in the summed-squared-differences form, which avoids
/// the cancellation in the stencil.
double energy(const SchrodingerOperator& op, const Vector& v);

/// <A f, f> / <f, f>
double rayleigh_quotient(const SchrodingerOperator& op, const Field& f);

}  // namespace invspec
