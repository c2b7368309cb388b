// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/spectral.hpp"

#include <algorithm>
#include <limits>

namespace invspec {

SpectralPair principal_eigenpair(const Field& q, const EigenOptions& opts,
                                 const Field* start) {
  return smallest_eigenpair(SchrodingerOperator(q), opts.tol, opts.maxit, start);
}

double eigenvalue_derivative(const SpectralPair& pair, const Field& h) {
  require_same_grid(pair.phi, h);
  const Vector& phi = pair.phi.values;
  const double w = pair.phi.grid.weight();
  const double norm2 = w * phi.squaredNorm();
  return w * (phi.array().square() * h.values.array()).sum() / norm2;
}

double eigenvalue_derivative(const Field& q, const Field& h, const EigenOptions& opts) {
  require_same_grid(q, h);
  return eigenvalue_derivative(principal_eigenpair(q, opts), h);
}

namespace {

bool is_constant(const Field& f) {
  return f.size() == 0 || f.max() - f.min() <= 1e-14 * std::max(1.0, max_abs(f));
}

}  // namespace

ConcavityReport concavity_probe(const Field& q1, const Field& q2, int t_samples,
                                const EigenOptions& opts) {
  require_same_grid(q1, q2);
  if (t_samples < 1) throw ConfigError("concavity probe needs at least one t sample");
  const Field diff = q1 - q2;
  if (max_abs(diff) == 0.0) throw ConfigError("concavity probe needs q1 != q2");

  ConcavityReport report;
  report.tolerance = opts.tol;
  report.nonconstant_difference = !is_constant(diff);
  report.lambda_q1 = principal_eigenpair(q1, opts).lambda;
  report.lambda_q2 = principal_eigenpair(q2, opts).lambda;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= t_samples; ++k) {
    ConcavitySample s;
    s.t = static_cast<double>(k) / (t_samples + 1);
    s.lambda_mix = principal_eigenpair(lincomb(s.t, q1, 1.0 - s.t, q2), opts).lambda;
    s.chord = s.t * report.lambda_q1 + (1.0 - s.t) * report.lambda_q2;
    s.slack = s.lambda_mix - s.chord;
    report.min_slack = std::min(report.min_slack, s.slack);
    report.samples.push_back(s);
  }
  report.passed = report.min_slack >= -10.0 * opts.tol &&
                  (!report.nonconstant_difference || report.min_slack > 0.0);
  return report;
}

double concavity_slack(const Field& q1, const Field& q2, double t, const EigenOptions& opts) {
  require_same_grid(q1, q2);
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double mix = principal_eigenpair(lincomb(t, q1, 1.0 - t, q2), opts).lambda;
  const double l1 = principal_eigenpair(q1, opts).lambda;
  const double l2 = principal_eigenpair(q2, opts).lambda;
  return mix - (t * l1 + (1.0 - t) * l2);
}

ContinuityReport continuity_probe(const Field& q, const Field& direction,
                                  const std::vector<double>& deltas,
                                  const EigenOptions& opts) {
  require_same_grid(q, direction);
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] < deltas[i - 1])) {
      throw ConfigError("continuity probe: deltas must be strictly decreasing");
    }
  }
  ContinuityReport report;
  report.tolerance = opts.tol;
  const SpectralPair base = principal_eigenpair(q, opts);
  report.lambda_base = base.lambda;
  const double dmax = max_abs(direction);
  report.passed = true;
  for (double delta : deltas) {
    ContinuityRow row;
    row.delta = delta;
    if (delta != 0.0) {
      const double l = principal_eigenpair(lincomb(1.0, q, delta, direction), opts, &base.phi).lambda;
      row.difference = std::abs(l - base.lambda);
    }
    row.envelope = std::abs(delta) * dmax;
    if (row.difference > row.envelope + 10.0 * opts.tol) report.passed = false;
    if (!report.rows.empty() &&
        row.difference > report.rows.back().difference + 10.0 * opts.tol) {
      report.passed = false;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace invspec
