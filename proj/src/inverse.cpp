// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/inverse.hpp"

#include <cmath>

namespace invspec {

double nu_recovery(const Field& u_hat, double p) {
  const double norm = l2_norm(u_hat);
  if (norm == 0.0) throw Error("nu recovery needs a nonzero u_hat");
  return std::pow(norm, 2.0 / (p - 1.0));
}

double objective_value(const Field& q0, const Field& q, double p) {
  require_same_grid(q0, q);
  if (!std::isfinite(p) || p < 1.0) throw ConfigError("objective needs finite p >= 1");
  return q.grid.weight() * (q.values - q0.values).array().abs().pow(p).sum();
}

VerificationReport verify(const Field& q_hat, const Field& u_hat, double lambda,
                          double tol_lambda, double tol_phi, const EigenOptions& eig) {
  require_same_grid(q_hat, u_hat);
  VerificationReport report;
  report.lambda_target = lambda;
  report.tol_lambda = tol_lambda;
  report.tol_phi = tol_phi;
  const SpectralPair pair = principal_eigenpair(q_hat, eig);
  report.eig = pair.report;
  report.lambda_achieved = pair.lambda;
  report.eigen_gap = std::abs(pair.lambda - lambda);
  const double unorm = l2_norm(u_hat);
  report.alignment =
      unorm > 0.0 ? 1.0 - std::abs(inner_product(pair.phi, u_hat)) / unorm : 0.0;
  report.passed = report.eigen_gap <= tol_lambda && report.alignment <= tol_phi;
  return report;
}

VerificationReport verify(const InverseResult& result, double lambda, double tol_lambda,
                          double tol_phi, const EigenOptions& eig) {
  return verify(result.q_hat, result.u_hat, lambda, tol_lambda, tol_phi, eig);
}

InverseResult solve_inverse(const Field& q0, double lambda, double p,
                            const InverseOptions& opts) {
  const LogisticProblem problem = LogisticProblem::from_p(q0, lambda, p);
  const double tol_lambda =
      opts.tol_lambda > 0.0
          ? opts.tol_lambda
          : std::max(1e-8 * std::abs(lambda),
                     10.0 * (opts.logistic.eigen.tol + opts.logistic.tol));

  InverseResult result;
  result.p = p;
  result.gamma = problem.gamma;
  const SpectralPair pair = principal_eigenpair(q0, opts.logistic.eigen);
  result.lambda1_q0 = pair.lambda;
  if (std::abs(lambda - pair.lambda) <= 1e-12 * std::max(1.0, std::abs(pair.lambda))) {
    // lambda == lambda_1(q0): the infimum is attained by q0 itself.
    result.degenerate = true;
    result.q_hat = q0;
    result.u_hat = Field(q0.grid);
    result.logistic.u = result.u_hat;
    result.logistic.lambda1 = pair.lambda;
    result.verify = verify(result, lambda, tol_lambda, opts.tol_phi, opts.logistic.eigen);
    return result;
  }
  require_above_principal(problem, pair.lambda);

  result.logistic = solve_from(problem, amplitude_initial_guess(problem, pair),
                               opts.logistic, pair);
  result.u_hat = result.logistic.u;
  const double e = 2.0 / (p - 1.0);
  result.q_hat = q0 + map_pointwise(result.u_hat, [e](double u) { return std::pow(u, e); });
  result.nu = nu_recovery(result.u_hat, p);
  result.objective = objective_value(q0, result.q_hat, p);
  result.verify = verify(result, lambda, tol_lambda, opts.tol_phi, opts.logistic.eigen);
  return result;
}

}  // namespace invspec
