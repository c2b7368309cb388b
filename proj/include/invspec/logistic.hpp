// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "invspec/spectral.hpp"

#include <optional>

namespace invspec {

/// -Delta u + q0 u = lambda u - u^(gamma - 1), u > 0, u = 0 on the boundary.
struct LogisticProblem {
  Field q0;
  double lambda = 0.0;
  double gamma = 4.0;
  /// The L^p exponent linked to gamma by gamma = 2p / (p - 1).
  double p = 2.0;

  /// gamma = 2p / (p - 1); p must be admissible for the grid dimension.
  static LogisticProblem from_p(const Field& q0, double lambda, double p);
  /// Direct-gamma form with p = gamma / (gamma - 2); requires 2 < gamma <= 4.
  static LogisticProblem from_gamma(const Field& q0, double lambda, double gamma);
};

/// Throws ConfigError unless p lies in the admissible range for `dim`
/// ([2, inf) for dimensions below 4, which covers every grid we build).
void validate_exponent(double p, int dim);

struct LogisticOptions {
  double tol = 1e-10;
  int maxit = 200;
  /// Newton stops once ||F|| <= tol and the last step is below this
  /// fraction of max u.
  double step_tol = 1e-10;
  double bracket_tol = 1e-9;
  int bracket_maxit = 100000;
  EigenOptions eigen;
};

struct LogisticSolution {
  Field u;
  double residual_norm = 0.0;
  int newton_iterations = 0;
  /// max |u_max - u_min| when the monotone bracket was run, else NaN.
  double bracket_gap = std::numeric_limits<double>::quiet_NaN();
  bool used_bracket = false;
  double lambda1 = 0.0;
};

struct Bracket {
  Field u_min;
  Field u_max;
  int iterations_below = 0;
  int iterations_above = 0;
  double residual_min = 0.0;
  double residual_max = 0.0;
  double gap() const { return max_abs(u_max - u_min); }
};

/// (lambda - min q0)^(1/(gamma-2)), the constant supersolution and the
/// maximum-principle bound on any positive solution.
double supersolution_level(const LogisticProblem& problem);

/// Throws NoPositiveSolution when lambda <= lambda1 (within 1e-12 relative).
void require_above_principal(const LogisticProblem& problem, double lambda1);

/// c phi_1 with c = ((lambda - lambda_1) / <phi_1^(gamma-2), phi_1^2>)^(1/(gamma-2)).
Field amplitude_initial_guess(const LogisticProblem& problem, const SpectralPair& pair);

/// F(u) = A(q0) u - lambda u + u_+^(gamma-1). `clamped` receives the number
/// of negative entries replaced by zero inside the power.
Field residual(const LogisticProblem& problem, const Field& u, int* clamped = nullptr);
double residual_norm(const LogisticProblem& problem, const Field& u);
/// Rounding-level size of ||F(u)||: eps * (stencil norm + |q0| + |lambda| +
/// u^(gamma-2)) * ||u||. Newton and the monotone iteration accept a residual
/// at this floor when the configured tolerance is below it.
double residual_floor(const LogisticProblem& problem, const Field& u);

/// Damped Newton from u0 > 0. The step is halved until every node stays
/// positive and ||F|| decreases. Computes lambda_1(q0) itself unless given.
LogisticSolution newton_solve(const LogisticProblem& problem, const Field& u0,
                              const LogisticOptions& opts = {},
                              std::optional<double> lambda1 = std::nullopt);

/// Sub/supersolution iteration from eps phi_1 and the constant level M,
/// with (A + K) u_{k+1} = (K + lambda) u_k - u_k^(gamma-1). Monotonicity of
/// both sequences is checked at every step.
Bracket monotone_bracket_solve(const LogisticProblem& problem, const LogisticOptions& opts = {},
                               const SpectralPair* pair = nullptr);

/// Amplitude guess and Newton, falling back to the bracket midpoint plus a
/// Newton polish when Newton fails.
LogisticSolution solve(const LogisticProblem& problem, const LogisticOptions& opts = {});

/// Newton from an arbitrary positive start with the same bracket fallback.
LogisticSolution solve_from(const LogisticProblem& problem, const Field& u0,
                            const LogisticOptions& opts, const SpectralPair& pair);

}  // namespace invspec
