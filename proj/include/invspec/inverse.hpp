// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "invspec/logistic.hpp"

namespace invspec {

struct VerificationReport {
  double lambda_target = 0.0;
  double lambda_achieved = 0.0;
  double eigen_gap = 0.0;  // |lambda_1(q_hat) - lambda|
  double alignment = 0.0;  // 1 - |<phi_1(q_hat), u_hat / ||u_hat||>|
  double tol_lambda = 0.0;
  double tol_phi = 0.0;
  bool passed = false;
  EigSolveReport eig;
};

/// The L^p-closest potential to q0 with principal eigenvalue lambda.
struct InverseResult {
  Field q_hat;
  Field u_hat;
  double nu = 0.0;
  double objective = 0.0;  // ||q_hat - q0||_p^p
  double p = 2.0;
  double gamma = 4.0;
  double lambda1_q0 = 0.0;
  /// lambda == lambda_1(q0): q_hat = q0, u_hat = 0.
  bool degenerate = false;
  LogisticSolution logistic;
  VerificationReport verify;
};

struct InverseOptions {
  LogisticOptions logistic;
  /// Absolute eigen_gap tolerance; <= 0 selects
  /// max(1e-8 |lambda|, 10 (eigen tol + logistic tol)).
  double tol_lambda = 0.0;
  double tol_phi = 1e-8;
};

/// Solves the logistic problem with gamma = 2p/(p-1), sets
/// q_hat = q0 + u_hat^(2/(p-1)), recovers nu and verifies the result with an
/// independent eigensolve. Throws NoPositiveSolution below lambda_1(q0) and
/// ConfigError for inadmissible p.
InverseResult solve_inverse(const Field& q0, double lambda, double p,
                            const InverseOptions& opts = {});

/// nu = ||u_hat||_{L2}^(2/(p-1)), so that u_hat = nu^((p-1)/2) phi_1(q_hat).
double nu_recovery(const Field& u_hat, double p);

/// Eigensolves q_hat from the all-ones start and compares against lambda and
/// the direction of u_hat.
VerificationReport verify(const Field& q_hat, const Field& u_hat, double lambda,
                          double tol_lambda, double tol_phi, const EigenOptions& eig = {});
VerificationReport verify(const InverseResult& result, double lambda, double tol_lambda,
                          double tol_phi, const EigenOptions& eig = {});

/// Q(q) = ||q - q0||_{L^p}^p
double objective_value(const Field& q0, const Field& q, double p);

}  // namespace invspec
