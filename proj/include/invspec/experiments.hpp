// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "invspec/inverse.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace invspec {

/// Named numeric columns, one row per sweep point.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

void write_table_csv(std::ostream& os, const Table& table);
/// Two-column plot data: x,y with a one-line header.
void write_plot_csv(std::ostream& os, const Table& table, const std::string& x,
                    const std::string& y);

/// Discrete H1 seminorm (sum of squared differences over all edges,
/// boundary edges included).
double h1_seminorm(const Field& f);

struct SweepSpec {
  Field q0;
  Field direction;
  /// Strictly decreasing perturbation sizes (0 allowed as the last entry).
  std::vector<double> deltas;
  double lambda = 0.0;
  double p = 2.0;
  std::uint64_t seed = 0;
  InverseOptions options;
};

struct SweepResult {
  Table table;
  bool passed = false;
  std::string note;
};

/// Distances ||q_hat(lambda, q0 + delta h) - q_hat(lambda, q0)||_p and the
/// H1 / L2 distances of u_hat, one row per delta. passed: the q_hat and
/// u_hat distance columns decrease, and when the nonzero deltas span two
/// decades the last distance is at most 1e-2 times the first.
SweepResult stability_sweep_q0(const SweepSpec& spec);

/// One row per lambda (strictly decreasing, all above lambda_1(q0)) with
/// ||q_hat - q0||_p and ||u_hat||_2. passed: both columns strictly decrease,
/// and ||q_hat - q0||_p <= 1e-3 at the end when the final gap is at most
/// 1e-6 |lambda_1| + 1e-6.
SweepResult stability_sweep_lambda(const Field& q0, const std::vector<double>& lambdas,
                                   double p, const InverseOptions& options = {});

struct ConvergenceStudy {
  Table per_grid;     // n, h, lambda1, u_l2, qhat_lp
  Table differences;  // h_coarse, d_lambda1, d_u, d_qhat
  double order_lambda1 = 0.0;
  double order_u = 0.0;
  double order_qhat = 0.0;
  bool passed = false;  // every order >= 1.7
};

using PotentialSampler = std::function<Field(const Grid&)>;

/// Successive differences on >= 3 nested grids (coarse to fine) and least
/// squares orders in h for lambda_1(q0), u_hat and q_hat.
ConvergenceStudy convergence_study(const PotentialSampler& q0, double lambda, double p,
                                   const std::vector<Grid>& grids,
                                   const InverseOptions& options = {});

enum class ExponentMode { matched, literal };

/// Coupled system -Delta u_i + q0 u_i = lambda_i u_i - S^e u_i with
/// S = sum_j mu_j u_j^2, closed by <u_i, u_i> = 1. e = 1/(p-1) (matched) or
/// p/(p-1) (literal).
struct MultiEigProblem {
  Field q0;
  std::vector<double> targets;
  double p = 2.0;
  ExponentMode exponent_mode = ExponentMode::matched;
};

struct MultiEigReport {
  bool converged = false;
  std::string message;
  std::string closure = "L2-normalized u_i (imposed closure, not part of the original system)";
  ExponentMode exponent_mode = ExponentMode::matched;
  double exponent = 0.0;
  std::vector<double> mu;
  std::vector<Field> u;
  Field q_hat;
  std::vector<double> targets;
  std::vector<double> lambda_achieved;  // lowest eigenvalues of q_hat
  std::vector<double> errors;           // |lambda_i(q_hat) - target_i|
  double residual = 0.0;
  int iterations = 0;
  int mu_projections = 0;
};

/// Damped Newton on (u_1..u_m, mu_1..mu_m) from the eigenfunctions of q0 with
/// Galerkin amplitudes; mu is projected onto mu >= 0. Never throws on Newton
/// failure; the report says no solution was found from this start.
MultiEigReport multi_eigenvalue_solve(const MultiEigProblem& problem, double tol = 1e-10,
                                      int maxit = 100, const EigenOptions& eig = {});

std::string to_string(ExponentMode mode);

}  // namespace invspec
