// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/linops.hpp"

#include <algorithm>
#include <random>

namespace invspec {

SchrodingerOperator::SchrodingerOperator(const Field& potential)
    : grid(potential.grid), q(potential), shift(gershgorin_shift(potential)) {
  require_finite(potential, "potential");
}

void apply(const SchrodingerOperator& op, const Vector& in, Vector& out,
           double extra_shift) {
  const Grid& g = op.grid;
  const Vector& q = op.q.values;
  out.resize(in.size());
  const int nx = g.n(0);
  const double cx = 1.0 / (g.spacing(0) * g.spacing(0));
  if (g.dim() == 1) {
    for (int i = 0; i < nx; ++i) {
      const double left = i > 0 ? in[i - 1] : 0.0;
      const double right = i + 1 < nx ? in[i + 1] : 0.0;
      out[i] = cx * ((in[i] - left) + (in[i] - right)) + (q[i] + extra_shift) * in[i];
    }
    return;
  }
  const int ny = g.n(1);
  const double cy = 1.0 / (g.spacing(1) * g.spacing(1));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Eigen::Index k = g.index(i, j);
      const double c = in[k];
      const double w = i > 0 ? in[k - 1] : 0.0;
      const double e = i + 1 < nx ? in[k + 1] : 0.0;
      const double s = j > 0 ? in[k - nx] : 0.0;
      const double n = j + 1 < ny ? in[k + nx] : 0.0;
      out[k] = cx * ((c - w) + (c - e)) + cy * ((c - s) + (c - n)) +
               (q[k] + extra_shift) * c;
    }
  }
}

Field apply(const SchrodingerOperator& op, const Field& f) {
  if (!(f.grid == op.grid)) throw GridMismatch();
  Field out(f.grid);
  apply(op, f.values, out.values);
  return out;
}

double gershgorin_shift(const Field& q) { return std::max(0.0, -q.min()) + 1.0; }

SparseMatrix assemble(const SchrodingerOperator& op, double extra_shift) {
  const Grid& g = op.grid;
  const int nx = g.n(0);
  const int ny = g.dim() == 2 ? g.n(1) : 1;
  const double cx = 1.0 / (g.spacing(0) * g.spacing(0));
  const double cy = g.dim() == 2 ? 1.0 / (g.spacing(1) * g.spacing(1)) : 0.0;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(g.size()) * (g.dim() == 2 ? 5 : 3));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Eigen::Index k = g.index(i, j);
      entries.emplace_back(k, k, 2.0 * cx + 2.0 * cy + op.q[k] + extra_shift);
      if (i > 0) entries.emplace_back(k, k - 1, -cx);
      if (i + 1 < nx) entries.emplace_back(k, k + 1, -cx);
      if (j > 0) entries.emplace_back(k, k - nx, -cy);
      if (j + 1 < ny) entries.emplace_back(k, k + nx, -cy);
    }
  }
  SparseMatrix m(g.size(), g.size());
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

Field cg_solve(const SchrodingerOperator& op, const Field& b, double tol, int maxit,
               double extra_shift) {
  if (!(b.grid == op.grid)) throw GridMismatch();
  auto fn = [&](const Vector& in, Vector& out) { apply(op, in, out, extra_shift); };
  return Field(b.grid, cg_solve(fn, b.values, tol, maxit).x);
}

double energy(const SchrodingerOperator& op, const Vector& v) {
  const Grid& g = op.grid;
  const int nx = g.n(0);
  const int ny = g.dim() == 2 ? g.n(1) : 1;
  const double cx = 1.0 / (g.spacing(0) * g.spacing(0));
  const double cy = g.dim() == 2 ? 1.0 / (g.spacing(1) * g.spacing(1)) : 0.0;
  // Sum over all edges including the ones touching the boundary (value 0).
  double gx = 0.0;
  double gy = 0.0;
  for (int j = 0; j < ny; ++j) {
    const Eigen::Index row = g.index(0, j);
    double prev = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double d = v[row + i] - prev;
      gx += d * d;
      prev = v[row + i];
    }
    gx += prev * prev;
  }
  if (g.dim() == 2) {
    for (int i = 0; i < nx; ++i) {
      double prev = 0.0;
      for (int j = 0; j < ny; ++j) {
        const double d = v[g.index(i, j)] - prev;
        gy += d * d;
        prev = v[g.index(i, j)];
      }
      gy += prev * prev;
    }
  }
  const double potential = (op.q.values.array() * v.array().square()).sum();
  return g.weight() * (cx * gx + cy * gy + potential);
}

double rayleigh_quotient(const SchrodingerOperator& op, const Field& f) {
  if (!(f.grid == op.grid)) throw GridMismatch();
  const double ff = inner_product(f, f);
  if (ff == 0.0) throw Error("rayleigh quotient of the zero field");
  return energy(op, f.values) / ff;
}

namespace {

void orthogonalize(Vector& v, const std::vector<Eigenpair>& against, double weight) {
  for (const auto& pair : against) {
    v -= (weight * pair.phi.values.dot(v)) * pair.phi.values;
  }
}

/// Shifted inverse iteration, deflating `converged`.
Eigenpair inverse_iteration(const SchrodingerOperator& op, double tol, int maxit,
                            Vector v, const std::vector<Eigenpair>& converged) {
  if (!(tol > 0.0)) throw ConfigError("eigen tolerance must be positive");
  const Grid& g = op.grid;
  const double w = g.weight();
  const double sigma = op.shift;
  auto shifted = [&](const Vector& in, Vector& out) { apply(op, in, out, sigma); };
  // CG caps scale with the condition number of A + sigma I.
  const int cg_maxit = std::max<int>(1000, 20 * static_cast<int>(g.size()));

  Eigenpair result;
  Vector av(v.size());
  orthogonalize(v, converged, w);
  v /= std::sqrt(w * v.squaredNorm());
  for (int it = 0;; ++it) {
    apply(op, v, av);
    const double lambda = energy(op, v);
    const double residual = std::sqrt(w * (av - lambda * v).squaredNorm());
    result.lambda = lambda;
    result.report.iterations = it;
    result.report.residual = residual;
    if (residual <= tol) break;
    if (it >= maxit) {
      throw ConvergenceError("inverse iteration: iteration cap reached", residual);
    }
    // Schedule max(0.01 res, 0.1 tol), measured relative to |lambda + sigma|
    // so it compares with the CG residual of the warm start v / (lambda + sigma).
    const double inner_tol =
        std::min(0.1, std::max(0.01 * residual, 0.1 * tol) / std::abs(lambda + sigma));
    const Vector guess = v / (lambda + sigma);
    CgResult solve = cg_solve(shifted, v, inner_tol, cg_maxit, &guess);
    result.report.cg_total_iterations += solve.iterations;
    v = std::move(solve.x);
    orthogonalize(v, converged, w);
    const double norm = std::sqrt(w * v.squaredNorm());
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw ConvergenceError("inverse iteration: iterate collapsed", residual);
    }
    v /= norm;
  }
  result.phi = Field(g, std::move(v));
  require_finite(result.phi, "eigenvector");
  return result;
}

}  // namespace

Eigenpair smallest_eigenpair(const SchrodingerOperator& op, double tol, int maxit,
                             const Field* start) {
  Vector v = start ? start->values : Vector::Ones(op.grid.size());
  if (start && !(start->grid == op.grid)) throw GridMismatch();
  Eigenpair pair = inverse_iteration(op, tol, maxit, std::move(v), {});
  if (pair.phi.values.sum() < 0.0) pair.phi.values = -pair.phi.values;
  for (Eigen::Index k = 0; k < pair.phi.size(); ++k) {
    if (!(pair.phi[k] > 0.0)) {
      throw PositivityError("principal eigenvector is not positive at node " +
                            std::to_string(k) + "; refine the grid or smooth q");
    }
  }
  return pair;
}

std::vector<Eigenpair> lowest_eigenpairs(const SchrodingerOperator& op, int count,
                                         double tol, int maxit) {
  std::vector<Eigenpair> pairs;
  if (count < 1) return pairs;
  pairs.push_back(smallest_eigenpair(op, tol, maxit));
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 1; k < count; ++k) {
    Vector v(op.grid.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = unif(rng);
    Eigenpair pair = inverse_iteration(op, tol, maxit, std::move(v), pairs);
    Eigen::Index imax = 0;
    pair.phi.values.cwiseAbs().maxCoeff(&imax);
    if (pair.phi[imax] < 0.0) pair.phi.values = -pair.phi.values;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace invspec
