// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "invspec/linops.hpp"

#include <vector>

namespace invspec {

/// Principal eigenvalue with its L2-normalized positive eigenfunction.
using SpectralPair = Eigenpair;

struct EigenOptions {
  double tol = 1e-8;
  int maxit = 2000;
};

SpectralPair principal_eigenpair(const Field& q, const EigenOptions& opts = {},
                                 const Field* start = nullptr);

/// D lambda_1(q)(h) = <phi_1^2, h> / ||phi_1||^2, from an existing eigenpair.
double eigenvalue_derivative(const SpectralPair& pair, const Field& h);
double eigenvalue_derivative(const Field& q, const Field& h, const EigenOptions& opts = {});

struct ConcavitySample {
  double t = 0.0;
  double lambda_mix = 0.0;  // lambda_1(t q1 + (1-t) q2)
  double chord = 0.0;       // t lambda_1(q1) + (1-t) lambda_1(q2)
  double slack = 0.0;
};

struct ConcavityReport {
  std::vector<ConcavitySample> samples;
  double lambda_q1 = 0.0;
  double lambda_q2 = 0.0;
  double min_slack = 0.0;
  /// q1 - q2 is not constant, so strict concavity applies.
  bool nonconstant_difference = false;
  double tolerance = 0.0;
  bool passed = false;
};

/// Samples t = k / (t_samples + 1), k = 1..t_samples. passed means every
/// slack >= -10 tol, and additionally > 0 when q1 - q2 is nonconstant.
ConcavityReport concavity_probe(const Field& q1, const Field& q2, int t_samples,
                                const EigenOptions& opts = {});

/// Slack at a single t; exactly 0 at the endpoints.
double concavity_slack(const Field& q1, const Field& q2, double t,
                       const EigenOptions& opts = {});

struct ContinuityRow {
  double delta = 0.0;
  double difference = 0.0;  // |lambda_1(q + delta d) - lambda_1(q)|
  double envelope = 0.0;    // delta * max|d|, the min-max bound
};

struct ContinuityReport {
  std::vector<ContinuityRow> rows;
  double lambda_base = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// `deltas` must be strictly decreasing. passed means the differences do not
/// increase (up to 10 tol) and stay under the envelope.
ContinuityReport continuity_probe(const Field& q, const Field& direction,
                                  const std::vector<double>& deltas,
                                  const EigenOptions& opts = {});

}  // namespace invspec
