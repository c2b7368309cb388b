// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/crosscheck.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace invspec {

namespace {

/// Q and its nodal gradient.
double objective_and_gradient(const Field& q, const Field& q0, double p, Vector& grad) {
  const double w = q.grid.weight();
  const auto d = (q.values - q0.values).array();
  grad = (w * p) * (d.abs().pow(p - 2.0) * d).matrix();
  return w * d.abs().pow(p).sum();
}

}  // namespace

MeritEvaluation merit_and_gradient(const Field& q, const Field& q0, double lambda, double p,
                                   double rho, double mu, const EigenOptions& eig,
                                   const Field* warm_start) {
  require_same_grid(q, q0);
  if (!(p >= 2.0)) throw ConfigError("merit gradient needs p >= 2");
  MeritEvaluation ev;
  ev.pair = principal_eigenpair(q, eig, warm_start);
  ev.lambda1 = ev.pair.lambda;
  ev.violation = ev.lambda1 - lambda;
  Vector grad;
  ev.objective = objective_and_gradient(q, q0, p, grad);
  ev.merit = ev.objective + mu * ev.violation + 0.5 * rho * ev.violation * ev.violation;
  const double w = q.grid.weight();
  grad += (w * (mu + rho * ev.violation)) * ev.pair.phi.values.array().square().matrix();
  ev.gradient = Field(q.grid, std::move(grad));
  return ev;
}

Field tangent_project(const SpectralPair& pair, const Field& h) {
  require_same_grid(pair.phi, h);
  const Field phi2 = map_pointwise(pair.phi, [](double x) { return x * x; });
  const double coeff = inner_product(phi2, h) / inner_product(phi2, phi2);
  return lincomb(1.0, h, -coeff, phi2);
}

Field tangent_project(const Field& q, const Field& h, const EigenOptions& eig) {
  return tangent_project(principal_eigenpair(q, eig), h);
}

Field feasible_start(const Field& q0, double lambda, const Field& r, const EigenOptions& eig) {
  const Field shifted = q0 + r;
  return shifted + (lambda - principal_eigenpair(shifted, eig).lambda);
}

OptState augmented_lagrangian_minimize(const Field& q0, double lambda, double p,
                                       const Field& start, const CrosscheckOptions& opts) {
  require_same_grid(q0, start);
  const double w = q0.grid.weight();
  auto l2 = [w](const Vector& v) { return std::sqrt(w * v.squaredNorm()); };

  OptState state;
  state.q = start;
  state.rho = opts.rho0;

  // Least-squares multiplier at the start: argmin_mu ||grad Q + mu phi^2||.
  MeritEvaluation ev = merit_and_gradient(state.q, q0, lambda, p, state.rho, 0.0, opts.eigen);
  {
    const Vector phi2 = ev.pair.phi.values.array().square();
    Vector gq;
    objective_and_gradient(state.q, q0, p, gq);
    state.mu_al = -gq.dot(phi2) / (w * phi2.squaredNorm());
  }
  ev = merit_and_gradient(state.q, q0, lambda, p, state.rho, state.mu_al, opts.eigen);

  double inner_tol = 1e-2;
  double prev_violation = std::abs(ev.violation);
  int iteration = 0;
  double alpha = 0.1;
  for (int outer = 0;; ++outer) {
    state.outer_iterations = outer;
    // Inner loop: minimize the merit at fixed (mu, rho).
    int accepted = 0;
    int at_floor = 0;
    bool stalled = false;
    Vector g = ev.gradient.values / w;
    for (int inner = 0; inner < opts.maxit_inner; ++inner) {
      const double gnorm = l2(g);
      if (gnorm <= inner_tol) break;
      const double slope = w * g.squaredNorm();
      double a = alpha;
      MeritEvaluation trial;
      bool ok = false;
      // Below the rounding resolution of the merit the Armijo test only sees
      // noise; there a step is accepted when it lowers the gradient norm.
      const double resolution =
          64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(ev.merit));
      while (a > 1e-16) {
        const Field q_try(state.q.grid, state.q.values - a * g);
        trial = merit_and_gradient(q_try, q0, lambda, p, state.rho, state.mu_al, opts.eigen,
                                   &ev.pair.phi);
        if (trial.merit <= ev.merit - 1e-4 * a * slope) {
          ok = true;
        } else if (a * slope <= 1e4 * resolution && trial.merit <= ev.merit + resolution &&
                   l2(trial.gradient.values) / w < gnorm) {
          ok = true;
        }
        if (ok) {
          state.q = q_try;
          break;
        }
        a *= 0.5;
      }
      if (!ok) {
        stalled = true;  // merit at its resolution floor
        break;
      }
      // Steps whose merit decrease is noise and that barely move the gradient.
      const bool noise = ev.merit - trial.merit <= resolution &&
                         l2(trial.gradient.values) / w >= 0.99 * gnorm;
      at_floor = noise ? at_floor + 1 : 0;
      const Vector g_new = trial.gradient.values / w;
      const Vector s = -a * g;
      const Vector y = g_new - g;
      const double sy = s.dot(y);
      alpha = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-8, 1e4) : 1.0;
      ev = std::move(trial);
      g = g_new;
      ++accepted;
      state.history.push_back(HistoryRow{iteration++, outer, ev.objective, ev.violation, a,
                                         ev.pair.report.iterations, ev.merit});
      if (at_floor >= 3) {
        stalled = true;
        break;
      }
    }

    // Convergence in terms of the original problem.
    Vector gq;
    state.objective = objective_and_gradient(state.q, q0, p, gq);
    state.lambda1 = ev.lambda1;
    state.projected_gradient_norm =
        l2_norm(tangent_project(ev.pair, Field(state.q.grid, gq / w)));
    if (std::abs(ev.violation) <= opts.tol_c &&
        state.projected_gradient_norm <= opts.tol_g) {
      state.converged = true;
      return state;
    }
    if (outer + 1 >= opts.maxit_outer) {
      throw ConvergenceError("augmented Lagrangian: outer iteration cap reached",
                             std::abs(ev.violation));
    }
    if (stalled && accepted == 0 && inner_tol <= 0.5 * opts.tol_g &&
        std::abs(ev.violation) >= 0.25 * prev_violation) {
      throw ConvergenceError("augmented Lagrangian: line-search stagnation",
                             std::abs(ev.violation));
    }
    state.mu_al += state.rho * ev.violation;
    if (std::abs(ev.violation) > 0.25 * prev_violation) state.rho *= opts.rho_growth;
    prev_violation = std::abs(ev.violation);
    inner_tol = std::max(0.1 * inner_tol, 0.5 * opts.tol_g);
    ev = merit_and_gradient(state.q, q0, lambda, p, state.rho, state.mu_al, opts.eigen,
                            &ev.pair.phi);
  }
}

double stationarity_defect(const OptState& state, const Field& q0, double p,
                           const EigenOptions& eig) {
  const SpectralPair pair = principal_eigenpair(state.q, eig);
  const auto d = (state.q.values - q0.values).array();
  const Vector defect =
      p * d.abs().pow(p - 2.0) * d + state.mu_al * pair.phi.values.array().square();
  return lp_norm(Field(q0.grid, defect), 1.0);
}

void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& history) {
  os << "iteration,objective,violation,step,eigen_iterations,outer,merit\n";
  os << std::setprecision(17);
  for (const auto& r : history) {
    os << r.iteration << ',' << r.objective << ',' << r.violation << ',' << r.step << ','
       << r.eigen_iterations << ',' << r.outer << ',' << r.merit << '\n';
  }
}

}  // namespace invspec
