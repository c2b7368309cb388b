// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace invspec::cli {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string field_digest(const Field& f) {
  std::uint64_t h = fnv1a64(grid_json(f.grid).dump());
  const auto* raw = reinterpret_cast<const char*>(f.values.data());
  h = fnv1a64(std::string_view(raw, sizeof(double) * static_cast<std::size_t>(f.values.size())), h);
  return hex64(h);
}

namespace {

// JSON has no NaN; absent quantities become null.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json grid_json(const Grid& g) {
  Json j;
  j["dim"] = g.dim();
  Json n = Json::array(), ext = Json::array();
  for (int a = 0; a < g.dim(); ++a) {
    n.push_back(g.n(a));
    ext.push_back({g.lower(a), g.upper(a)});
  }
  j["n"] = n;
  j["extents"] = ext;
  return j;
}

Json to_json(const EigSolveReport& r) {
  return Json{{"iterations", r.iterations},
              {"residual", num(r.residual)},
              {"cg_total_iterations", r.cg_total_iterations}};
}

Json to_json(const ConcavityReport& r, const Field& q1, const Field& q2) {
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    samples.push_back(
        {{"t", s.t}, {"lambda_mix", s.lambda_mix}, {"chord", s.chord}, {"slack", s.slack}});
  }
  return Json{{"inputs_hash", hex64(fnv1a64(field_digest(q1) + field_digest(q2)))},
              {"lambda_q1", r.lambda_q1},
              {"lambda_q2", r.lambda_q2},
              {"samples", samples},
              {"min_slack", r.min_slack},
              {"nonconstant_difference", r.nonconstant_difference},
              {"tolerance", r.tolerance},
              {"passed", r.passed}};
}

Json logistic_sidecar(const LogisticProblem& problem, const LogisticSolution& s) {
  return Json{{"lambda", problem.lambda},
              {"gamma", problem.gamma},
              {"p", problem.p},
              {"residual_norm", s.residual_norm},
              {"iterations", s.newton_iterations},
              {"max_u", s.u.max()},
              {"bracket_gap", num(s.bracket_gap)}};
}

Json to_json(const InverseResult& r) {
  return Json{{"lambda_target", r.verify.lambda_target},
              {"lambda_achieved", r.verify.lambda_achieved},
              {"lambda1_q0", r.lambda1_q0},
              {"p", r.p},
              {"gamma", r.gamma},
              {"nu", r.nu},
              {"objective", r.objective},
              {"eigen_gap", r.verify.eigen_gap},
              {"alignment", r.verify.alignment},
              {"tol_lambda", r.verify.tol_lambda},
              {"tol_phi", r.verify.tol_phi},
              {"verified", r.verify.passed},
              {"degenerate", r.degenerate},
              {"solver",
               {{"logistic_residual", r.logistic.residual_norm},
                {"newton_iterations", r.logistic.newton_iterations},
                {"used_bracket", r.logistic.used_bracket},
                {"bracket_gap", num(r.logistic.bracket_gap)},
                {"verify_eigensolve", to_json(r.verify.eig)}}}};
}

Json to_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row = Json::array();
    for (double x : r) row.push_back(num(x));
    rows.push_back(row);
  }
  return Json{{"columns", t.columns}, {"rows", rows}};
}

Json to_json(const ConvergenceStudy& s) {
  return Json{{"per_grid", to_json(s.per_grid)},
              {"differences", to_json(s.differences)},
              {"order_lambda1", s.order_lambda1},
              {"order_u", s.order_u},
              {"order_qhat", s.order_qhat},
              {"passed", s.passed}};
}

Json to_json(const MultiEigReport& r) {
  Json j{{"converged", r.converged},
         {"message", r.message},
         {"closure", r.closure},
         {"exponent_mode", to_string(r.exponent_mode)},
         {"exponent", r.exponent},
         {"targets", r.targets},
         {"mu", r.mu},
         {"mu_projections", r.mu_projections},
         {"residual", num(r.residual)},
         {"iterations", r.iterations}};
  j["lambda_achieved"] = r.lambda_achieved;
  j["errors"] = r.errors;
  return j;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write '" + path + "'");
  os << j.dump(2) << '\n';
}

Json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace invspec::cli
