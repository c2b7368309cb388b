// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/cli/run.hpp"

#include "invspec/crosscheck.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

namespace invspec::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
  const RunConfig& config;
  std::ostream& log;
  fs::path dir;
  Grid grid;
  Field q0;
  EigenOptions eig;
  std::string hash;
  Json summary;

  std::string path(const std::string& name) const { return (dir / name).string(); }

  InverseOptions inverse_options() const {
    InverseOptions o;
    o.logistic.tol = config.tol;
    o.logistic.maxit = config.maxit;
    o.logistic.eigen = eig;
    return o;
  }

  double target_lambda(const Field& q) const {
    if (config.lambda) return *config.lambda;
    return principal_eigenpair(q, eig).lambda + *config.lambda_offset;
  }

  void write_table(const std::string& name, const Table& t) const {
    std::ofstream os(path(name));
    os << "# tool=" << kToolName << " " << kToolVersion << ", config_hash=" << hash
       << ", seed=" << (config.seed ? std::to_string(*config.seed) : "none")
       << ", grid=" << grid_json(grid).dump() << ", tol=" << config.tol
       << ", eig_tol=" << eig.tol << '\n';
    write_table_csv(os, t);
  }

  void write_plot(const std::string& name, const Table& t, const std::string& x,
                  const std::string& y) const {
    std::ofstream os(path(name));
    write_plot_csv(os, t, x, y);
  }
};

const char* status_name(int code) {
  switch (code) {
    case kSuccess: return "ok";
    case kVerificationFailure: return "verification_failure";
    case kSolverFailure: return "solver_failure";
    default: return "config_error";
  }
}

int cmd_eig(Context& ctx) {
  const SpectralPair pair = principal_eigenpair(ctx.q0, ctx.eig);
  ctx.summary["lambda1"] = pair.lambda;
  ctx.summary["phi1_min"] = pair.phi.min();
  ctx.summary["phi1_max"] = pair.phi.max();
  ctx.summary["eigensolve"] = to_json(pair.report);
  write_field_csv(ctx.path("phi1.csv"), pair.phi);
  ctx.log << "lambda_1 = " << pair.lambda << " (residual " << pair.report.residual << ")\n";
  return kSuccess;
}

int cmd_forward(Context& ctx) {
  const RunConfig& c = ctx.config;
  const double lambda = ctx.target_lambda(ctx.q0);
  const auto problem = LogisticProblem::from_p(ctx.q0, lambda, c.p);
  const InverseOptions io = ctx.inverse_options();
  const LogisticSolution sol = solve(problem, io.logistic);
  const double bound = supersolution_level(problem);
  Json sidecar = logistic_sidecar(problem, sol);
  sidecar["lambda1"] = sol.lambda1;
  sidecar["max_principle_bound"] = bound;
  sidecar["min_u"] = sol.u.min();
  write_json(ctx.path("u_hat.json"), sidecar);
  write_field_csv(ctx.path("u_hat.csv"), sol.u);
  ctx.summary["logistic"] = sidecar;

  bool ok = sol.u.min() > 0.0 && sol.u.max() <= bound + 1e-10 && sol.residual_norm <= c.tol;
  if (c.multistart > 0) {
    const SpectralPair pair = principal_eigenpair(ctx.q0, ctx.eig);
    const Field base = amplitude_initial_guess(problem, pair);
    std::mt19937_64 rng(*c.seed);
    std::uniform_real_distribution<double> factor(0.5, 2.0);
    double deviation = 0.0;
    for (int k = 0; k < c.multistart; ++k) {
      Field u0 = base;
      for (Eigen::Index i = 0; i < u0.values.size(); ++i) u0.values[i] *= factor(rng);
      const LogisticSolution s = solve_from(problem, u0, io.logistic, pair);
      deviation = std::max(deviation, max_abs(s.u - sol.u));
    }
    const Bracket b = monotone_bracket_solve(problem, io.logistic, &pair);
    deviation = std::max({deviation, max_abs(b.u_min - sol.u), max_abs(b.u_max - sol.u)});
    ctx.summary["multistart"] = Json{{"starts", c.multistart},
                                     {"bracket_gap", b.gap()},
                                     {"max_deviation", deviation},
                                     {"tolerance", 1e-8}};
    ok = ok && deviation <= 1e-8;
  }
  ctx.log << "forward: residual " << sol.residual_norm << ", max u " << sol.u.max() << '\n';
  return ok ? kSuccess : kVerificationFailure;
}

int cmd_inverse(Context& ctx) {
  const double lambda = ctx.target_lambda(ctx.q0);
  const InverseResult r = solve_inverse(ctx.q0, lambda, ctx.config.p, ctx.inverse_options());
  ctx.summary["inverse"] = to_json(r);
  ctx.summary["logistic"] = logistic_sidecar(
      LogisticProblem{ctx.q0, lambda, r.gamma, r.p}, r.logistic);
  write_field_csv(ctx.path("q_hat.csv"), r.q_hat);
  write_field_csv(ctx.path("u_hat.csv"), r.u_hat);
  ctx.log << "inverse: nu " << r.nu << ", Q " << r.objective << ", eigen gap "
          << r.verify.eigen_gap << ", alignment " << r.verify.alignment << '\n';
  return r.verify.passed ? kSuccess : kVerificationFailure;
}

int cmd_crosscheck(Context& ctx) {
  const RunConfig& c = ctx.config;
  const double lambda = ctx.target_lambda(ctx.q0);
  const InverseResult r = solve_inverse(ctx.q0, lambda, c.p, ctx.inverse_options());
  write_field_csv(ctx.path("q_hat.csv"), r.q_hat);
  CrosscheckOptions opts;
  opts.eigen = ctx.eig;
  opts.tol_g = c.tol;
  opts.maxit_inner = c.maxit;

  Json runs = Json::array();
  bool ok = true;
  for (int k = 0; k < c.starts; ++k) {
    Field perturbation = Field::constant(ctx.grid, 0.0);
    if (k > 0) {
      PotentialDescriptor d;
      d.family = "fourier_random";
      d.amplitude = c.start_amplitude;
      perturbation = sample_potential(d, ctx.grid, *c.seed + static_cast<std::uint64_t>(k));
    }
    const Field start = feasible_start(ctx.q0, lambda, perturbation, ctx.eig);
    const OptState s = augmented_lagrangian_minimize(ctx.q0, lambda, c.p, start, opts);
    const double dist = l2_norm(s.q - r.q_hat);
    const double violation = s.lambda1 - lambda;
    const bool pass = dist <= 1e-3 && s.objective >= r.objective - 1e-6 &&
                      std::abs(violation) <= 1e-6;
    ok = ok && pass;
    runs.push_back({{"start", k},
                    {"converged", s.converged},
                    {"iterations", s.history.size()},
                    {"outer_iterations", s.outer_iterations},
                    {"objective", s.objective},
                    {"violation", violation},
                    {"l2_distance_to_qhat", dist},
                    {"lp_distance_to_qhat", lp_norm(s.q - r.q_hat, c.p)},
                    {"projected_gradient_norm", s.projected_gradient_norm},
                    {"passed", pass}});
    std::ofstream hist(ctx.path(k == 0 ? "history.csv" : "history_" + std::to_string(k) + ".csv"));
    write_history_csv(hist, s.history);
    if (k == 0) write_field_csv(ctx.path("q_opt.csv"), s.q);
    ctx.log << "start " << k << ": |q - q_hat|_2 = " << dist << ", Q = " << s.objective << '\n';
  }
  ctx.summary["inverse"] = to_json(r);
  ctx.summary["objective_qhat"] = r.objective;
  ctx.summary["runs"] = runs;
  ctx.summary["tolerances"] = {{"l2_distance", 1e-3}, {"objective", 1e-6}, {"violation", 1e-6}};
  return ok ? kSuccess : kVerificationFailure;
}

void emit_sweep(Context& ctx, const SweepResult& s) {
  ctx.write_table("sweep.csv", s.table);
  Json doc{{"provenance",
            {{"tool", kToolName},
             {"version", kToolVersion},
             {"config_hash", ctx.hash},
             {"seed", ctx.config.seed ? Json(*ctx.config.seed) : Json(nullptr)},
             {"grid", grid_json(ctx.grid)},
             {"tol", ctx.config.tol},
             {"eig_tol", ctx.eig.tol}}},
           {"table", to_json(s.table)}};
  write_json(ctx.path("sweep.json"), doc);
  ctx.summary["sweep"] = to_json(s.table);
  ctx.summary["passed"] = s.passed;
  ctx.summary["note"] = s.note;
}

int cmd_sweep_q0(Context& ctx) {
  const RunConfig& c = ctx.config;
  SweepSpec spec{ctx.q0,
                 sample_potential(c.direction, ctx.grid,
                                  c.seed ? std::optional(*c.seed + 1) : std::nullopt),
                 c.deltas,
                 ctx.target_lambda(ctx.q0),
                 c.p,
                 c.seed.value_or(0),
                 ctx.inverse_options()};
  const SweepResult s = stability_sweep_q0(spec);
  emit_sweep(ctx, s);
  ctx.write_plot("plot_stability.csv", s.table, "delta", "qhat_lp_distance");
  return s.passed ? kSuccess : kVerificationFailure;
}

int cmd_sweep_lambda(Context& ctx) {
  const RunConfig& c = ctx.config;
  std::vector<double> lambdas = c.lambda_schedule;
  if (lambdas.empty()) {
    const double l1 = principal_eigenpair(ctx.q0, ctx.eig).lambda;
    for (double gap : c.gap_schedule) lambdas.push_back(l1 + gap);
  }
  const SweepResult s = stability_sweep_lambda(ctx.q0, lambdas, c.p, ctx.inverse_options());
  emit_sweep(ctx, s);
  ctx.write_plot("plot_bifurcation.csv", s.table, "lambda", "uhat_l2");
  ctx.write_plot("plot_stability.csv", s.table, "gap", "qhat_lp_distance");
  return s.passed ? kSuccess : kVerificationFailure;
}

int cmd_converge(Context& ctx) {
  const RunConfig& c = ctx.config;
  std::vector<Grid> grids;
  for (int n : c.grids) grids.push_back(c.grid.build(n));
  auto sampler = [&](const Grid& g) { return sample_potential(c.q0, g, c.seed); };
  const double lambda = ctx.target_lambda(sampler(grids.back()));
  const ConvergenceStudy study =
      convergence_study(sampler, lambda, c.p, grids, ctx.inverse_options());
  ctx.write_table("per_grid.csv", study.per_grid);
  ctx.write_table("sweep.csv", study.differences);
  ctx.write_plot("plot_convergence.csv", study.differences, "h", "d_uhat");
  ctx.summary["lambda"] = lambda;
  ctx.summary["convergence"] = to_json(study);
  ctx.log << "orders: lambda1 " << study.order_lambda1 << ", u " << study.order_u << ", q "
          << study.order_qhat << '\n';
  return study.passed ? kSuccess : kVerificationFailure;
}

int cmd_multi(Context& ctx) {
  const RunConfig& c = ctx.config;
  const MultiEigReport r = multi_eigenvalue_solve(
      MultiEigProblem{ctx.q0, c.targets, c.p, c.exponent_mode}, c.tol, c.maxit, ctx.eig);
  ctx.summary["multi"] = to_json(r);
  for (std::size_t i = 0; i < r.u.size(); ++i) {
    write_field_csv(ctx.path("u_" + std::to_string(i + 1) + ".csv"), r.u[i]);
  }
  if (r.converged) write_field_csv(ctx.path("q_hat.csv"), r.q_hat);
  ctx.log << "multi: " << r.message << '\n';
  // Findings report only; a failed Newton solve is a solver failure, not a verdict.
  return r.converged ? kSuccess : kSolverFailure;
}

int dispatch(Context& ctx) {
  const std::string& cmd = ctx.config.command;
  if (cmd == "eig") return cmd_eig(ctx);
  if (cmd == "forward") return cmd_forward(ctx);
  if (cmd == "inverse") return cmd_inverse(ctx);
  if (cmd == "crosscheck") return cmd_crosscheck(ctx);
  if (cmd == "sweep-q0") return cmd_sweep_q0(ctx);
  if (cmd == "sweep-lambda") return cmd_sweep_lambda(ctx);
  if (cmd == "converge") return cmd_converge(ctx);
  if (cmd == "multi") return cmd_multi(ctx);
  throw ConfigError("unknown command '" + cmd + "'");
}

}  // namespace

int run(const RunConfig& config, std::ostream& log) {
  Context ctx{config, log, fs::path(resolve_output_dir(config)), {}, {}, {}, config_hash(config), {}};
  std::error_code ec;
  fs::create_directories(ctx.dir, ec);
  if (ec) {
    log << "error: cannot create output directory " << ctx.dir << ": " << ec.message() << '\n';
    return kConfigError;
  }
  const Json echo = to_json(config);
  write_json(ctx.path("manifest.json"),
             Json{{"tool", kToolName},
                  {"version", kToolVersion},
                  {"config_hash", ctx.hash},
                  {"seed", config.seed ? Json(*config.seed) : Json(nullptr)},
                  {"config", echo}});
  ctx.summary["command"] = config.command;
  ctx.summary["config_hash"] = ctx.hash;
  ctx.summary["status"] = nullptr;

  int code = kSuccess;
  try {
    ctx.grid = config.grid.build();
    ctx.q0 = sample_potential(config.q0, ctx.grid, config.seed);
    ctx.eig = EigenOptions{config.eig_tol, config.eig_maxit};
    ctx.summary["grid"] = grid_json(ctx.grid);
    code = dispatch(ctx);
  } catch (const ConfigError& e) {
    code = kConfigError;
    ctx.summary["error"] = e.what();
  } catch (const GridMismatch& e) {
    code = kConfigError;
    ctx.summary["error"] = e.what();
  } catch (const Error& e) {
    code = kSolverFailure;
    ctx.summary["error"] = e.what();
  }
  ctx.summary["status"] = status_name(code);
  ctx.summary["exit_code"] = code;
  write_json(ctx.path("summary.json"), ctx.summary);
  if (ctx.summary.contains("error")) {
    log << "error: " << ctx.summary["error"].get<std::string>() << '\n';
  }
  log << config.command << ": " << status_name(code) << " (artifacts in " << ctx.dir.string()
      << ")\n";
  return code;
}

}  // namespace invspec::cli
