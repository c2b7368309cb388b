// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "invspec/spectral.hpp"

#include <iosfwd>
#include <vector>

namespace invspec {

/// Merit Q(q) + mu (lambda_1(q) - lambda) + rho/2 (lambda_1(q) - lambda)^2
/// with its gradient with respect to the nodal values of q.
struct MeritEvaluation {
  double merit = 0.0;
  double objective = 0.0;
  double lambda1 = 0.0;
  double violation = 0.0;  // lambda_1(q) - lambda
  Field gradient;
  SpectralPair pair;
};

MeritEvaluation merit_and_gradient(const Field& q, const Field& q0, double lambda, double p,
                                   double rho, double mu, const EigenOptions& eig = {},
                                   const Field* warm_start = nullptr);

/// h - (<phi^2, h> / <phi^2, phi^2>) phi^2 for the principal eigenfunction phi.
Field tangent_project(const SpectralPair& pair, const Field& h);
Field tangent_project(const Field& q, const Field& h, const EigenOptions& eig = {});

/// q0 + r + (lambda - lambda_1(q0 + r)), which has principal eigenvalue lambda.
Field feasible_start(const Field& q0, double lambda, const Field& r, const EigenOptions& eig = {});

struct HistoryRow {
  int iteration = 0;
  int outer = 0;
  double objective = 0.0;
  double violation = 0.0;
  double step = 0.0;
  int eigen_iterations = 0;
  double merit = 0.0;
};

struct OptState {
  Field q;
  double rho = 10.0;
  double mu_al = 0.0;
  std::vector<HistoryRow> history;
  double lambda1 = 0.0;
  double objective = 0.0;
  /// L2 norm of the tangential part of the objective gradient.
  double projected_gradient_norm = 0.0;
  int outer_iterations = 0;
  bool converged = false;
};

struct CrosscheckOptions {
  EigenOptions eigen{1e-9, 2000};
  double rho0 = 10.0;
  double rho_growth = 5.0;
  double tol_c = 1e-9;
  double tol_g = 1e-5;
  int maxit_outer = 40;
  int maxit_inner = 4000;
};

/// Augmented Lagrangian for min Q(q) subject to lambda_1(q) = lambda. The
/// inner loop is gradient descent in the L2 metric with Barzilai-Borwein
/// trial steps and Armijo backtracking on the merit. Throws ConvergenceError
/// on the outer cap or when an outer pass makes no progress.
OptState augmented_lagrangian_minimize(const Field& q0, double lambda, double p,
                                       const Field& start, const CrosscheckOptions& opts = {});

/// L1 norm of p (q - q0)|q - q0|^(p-2) - nu phi_1^2(q) with nu = -mu_al.
double stationarity_defect(const OptState& state, const Field& q0, double p,
                           const EigenOptions& eig = {});

/// iteration,objective,violation,step,eigen_iterations (plus outer, merit)
void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& history);

}  // namespace invspec
