// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/logistic.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace invspec {

void validate_exponent(double p, int dim) {
  if (!std::isfinite(p)) throw ConfigError("p must be finite");
  bool ok = false;
  if (dim < 4) {
    ok = p >= 2.0;
  } else if (dim == 4) {
    ok = p > 2.0;
  } else {
    ok = p >= dim / 2.0;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "p = " << p << " is not admissible in dimension " << dim
        << (dim < 4 ? ": need p in [2, +inf)" : "");
    throw ConfigError(msg.str());
  }
}

LogisticProblem LogisticProblem::from_p(const Field& q0, double lambda, double p) {
  validate_exponent(p, q0.grid.dim());
  return LogisticProblem{q0, lambda, 2.0 * p / (p - 1.0), p};
}

LogisticProblem LogisticProblem::from_gamma(const Field& q0, double lambda, double gamma) {
  const int dim = q0.grid.dim();
  const bool ok = dim < 4 ? (gamma > 2.0 && gamma <= 4.0) : (gamma > 2.0 && gamma < 4.0);
  if (!std::isfinite(gamma) || !ok) {
    throw ConfigError("gamma must satisfy 2 < gamma <= 4 in dimension " + std::to_string(dim));
  }
  return LogisticProblem{q0, lambda, gamma, gamma / (gamma - 2.0)};
}

double supersolution_level(const LogisticProblem& problem) {
  return std::pow(problem.lambda - problem.q0.min(), 1.0 / (problem.gamma - 2.0));
}

void require_above_principal(const LogisticProblem& problem, double lambda1) {
  const double gap = problem.lambda - lambda1;
  const double eq_tol = 1e-12 * std::max(1.0, std::abs(lambda1));
  std::ostringstream msg;
  msg.precision(12);
  if (std::abs(gap) <= eq_tol) {
    msg << "lambda = " << problem.lambda << " equals lambda_1(q0) = " << lambda1
        << ": the logistic problem has only the zero solution; need lambda > lambda_1(q0)";
    throw NoPositiveSolution(msg.str(), problem.lambda, lambda1);
  }
  if (gap < 0.0) {
    msg << "lambda = " << problem.lambda << " is below lambda_1(q0) = " << lambda1
        << ": no positive solution exists; admissible range is (" << lambda1 << ", +inf)";
    throw NoPositiveSolution(msg.str(), problem.lambda, lambda1);
  }
}

Field amplitude_initial_guess(const LogisticProblem& problem, const SpectralPair& pair) {
  const double gap = problem.lambda - pair.lambda;
  if (gap <= 0.0) return Field(pair.phi.grid);
  const double e = problem.gamma - 2.0;
  const Vector& phi = pair.phi.values;
  const double moment =
      pair.phi.grid.weight() * (phi.array().pow(e) * phi.array().square()).sum();
  const double c = std::pow(gap / moment, 1.0 / e);
  return c * pair.phi;
}

Field residual(const LogisticProblem& problem, const Field& u, int* clamped) {
  require_same_grid(problem.q0, u);
  const SchrodingerOperator op(problem.q0);
  Field f(u.grid);
  apply(op, u.values, f.values, -problem.lambda);
  int negatives = 0;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    double uk = u[k];
    if (uk < 0.0) {
      uk = 0.0;
      ++negatives;
    }
    f.values[k] += std::pow(uk, problem.gamma - 1.0);
  }
  if (clamped) *clamped = negatives;
  require_finite(f, "logistic residual");
  return f;
}

double residual_norm(const LogisticProblem& problem, const Field& u) {
  return l2_norm(residual(problem, u));
}

double residual_floor(const LogisticProblem& problem, const Field& u) {
  const Grid& g = u.grid;
  double stencil = 0.0;
  for (int a = 0; a < g.dim(); ++a) stencil += 4.0 / (g.spacing(a) * g.spacing(a));
  const double umax = std::max(0.0, u.max());
  const double scale = stencil + max_abs(problem.q0) + std::abs(problem.lambda) +
                       std::pow(umax, problem.gamma - 2.0);
  return std::numeric_limits<double>::epsilon() * scale * l2_norm(u);
}

LogisticSolution newton_solve(const LogisticProblem& problem, const Field& u0,
                              const LogisticOptions& opts, std::optional<double> lambda1) {
  require_same_grid(problem.q0, u0);
  if (!(u0.min() > 0.0)) throw ConfigError("newton_solve needs a positive start");
  const double l1 =
      lambda1 ? *lambda1 : principal_eigenpair(problem.q0, opts.eigen).lambda;
  require_above_principal(problem, l1);

  const SchrodingerOperator op(problem.q0);
  const SparseMatrix base = assemble(op, -problem.lambda);
  Eigen::SparseLU<SparseMatrix> lu;
  lu.analyzePattern(base);

  LogisticSolution sol;
  sol.lambda1 = l1;
  Field u = u0;
  Field f = residual(problem, u);
  double fnorm = l2_norm(f);
  double last_step = std::numeric_limits<double>::infinity();
  for (int it = 0;; ++it) {
    sol.newton_iterations = it;
    if (fnorm <= opts.tol && last_step <= opts.step_tol * u.max()) break;
    if (it >= opts.maxit) {
      throw ConvergenceError("newton: iteration cap reached", fnorm);
    }
    SparseMatrix jac = base;
    const Vector d = (problem.gamma - 1.0) * u.values.array().pow(problem.gamma - 2.0);
    for (Eigen::Index k = 0; k < d.size(); ++k) jac.coeffRef(k, k) += d[k];
    lu.factorize(jac);
    if (lu.info() != Eigen::Success) {
      throw ConvergenceError("newton: Jacobian factorization failed", fnorm);
    }
    const Vector step = -lu.solve(f.values);
    if (!step.allFinite()) throw ConvergenceError("newton: Jacobian solve failed", fnorm);

    double alpha = 1.0;
    auto positive = [&](double a) { return ((u.values + a * step).array() > 0.0).all(); };
    while (!positive(alpha)) {
      alpha *= 0.5;
      if (alpha < 1e-14) throw ConvergenceError("newton: positivity safeguard stalled", fnorm);
    }
    // Once the residual is within tolerance only take steps that do not
    // increase it; otherwise require sufficient decrease.
    const bool polishing = fnorm <= opts.tol;
    Field trial;
    double trial_norm = 0.0;
    for (;;) {
      trial = Field(u.grid, u.values + alpha * step);
      Field ft = residual(problem, trial);
      trial_norm = l2_norm(ft);
      const bool accept = polishing ? trial_norm <= fnorm
                                    : trial_norm <= (1.0 - 1e-4 * alpha) * fnorm;
      if (accept) {
        f = std::move(ft);
        break;
      }
      alpha *= 0.5;
      if (alpha < 1e-12) {
        if (polishing) {
          trial_norm = -1.0;
          break;
        }
        if (fnorm <= residual_floor(problem, u)) {
          trial_norm = -1.0;
          break;
        }
        throw ConvergenceError("newton: line search stagnation", fnorm);
      }
    }
    if (trial_norm < 0.0) break;  // residual at its floor
    last_step = alpha * step.cwiseAbs().maxCoeff();
    u = std::move(trial);
    fnorm = trial_norm;
    sol.newton_iterations = it + 1;
  }
  sol.u = std::move(u);
  sol.residual_norm = fnorm;
  return sol;
}

Bracket monotone_bracket_solve(const LogisticProblem& problem, const LogisticOptions& opts,
                               const SpectralPair* pair) {
  SpectralPair own;
  if (!pair) {
    own = principal_eigenpair(problem.q0, opts.eigen);
    pair = &own;
  }
  require_above_principal(problem, pair->lambda);
  const double e = problem.gamma - 2.0;
  const double level = supersolution_level(problem);
  const double phi_max = pair->phi.max();
  const double eps = std::min(0.5 * std::pow(problem.lambda - pair->lambda, 1.0 / e), level) / phi_max;
  const double shift =
      std::max(0.0, -problem.q0.min()) + (problem.gamma - 1.0) * std::pow(level, e);

  const SchrodingerOperator op(problem.q0);
  Eigen::SimplicialLDLT<SparseMatrix> chol(assemble(op, shift));
  if (chol.info() != Eigen::Success) {
    throw ConvergenceError("monotone iteration: factorization failed", 0.0);
  }

  const double slack = 1e-10 * std::max(1.0, level);
  auto run = [&](Field u, bool increasing, int& iterations, double& res) {
    for (int it = 0;; ++it) {
      res = residual_norm(problem, u);
      iterations = it;
      if (res <= std::max(opts.bracket_tol, residual_floor(problem, u))) return u;
      if (it >= opts.bracket_maxit) {
        throw ConvergenceError("monotone iteration: iteration cap reached", res);
      }
      const Vector rhs = (shift + problem.lambda) * u.values -
                         u.values.cwiseMax(0.0).array().pow(problem.gamma - 1.0).matrix();
      Field next(u.grid, chol.solve(rhs));
      const Vector change = next.values - u.values;
      const double violation = increasing ? -change.minCoeff() : change.maxCoeff();
      if (violation > slack) {
        throw Error(std::string("monotone iteration lost monotonicity from ") +
                    (increasing ? "below" : "above"));
      }
      u = std::move(next);
    }
  };

  Bracket b;
  b.u_min = run(eps * pair->phi, true, b.iterations_below, b.residual_min);
  b.u_max = run(Field::constant(problem.q0.grid, level), false, b.iterations_above,
                b.residual_max);
  return b;
}

LogisticSolution solve_from(const LogisticProblem& problem, const Field& u0,
                            const LogisticOptions& opts, const SpectralPair& pair) {
  require_above_principal(problem, pair.lambda);
  try {
    return newton_solve(problem, u0, opts, pair.lambda);
  } catch (const ConvergenceError&) {
    const Bracket b = monotone_bracket_solve(problem, opts, &pair);
    LogisticSolution sol = newton_solve(problem, 0.5 * (b.u_min + b.u_max), opts, pair.lambda);
    sol.bracket_gap = b.gap();
    sol.used_bracket = true;
    return sol;
  }
}

LogisticSolution solve(const LogisticProblem& problem, const LogisticOptions& opts) {
  const SpectralPair pair = principal_eigenpair(problem.q0, opts.eigen);
  require_above_principal(problem, pair.lambda);
  return solve_from(problem, amplitude_initial_guess(problem, pair), opts, pair);
}

}  // namespace invspec
