// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "invspec/experiments.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace invspec::cli {

using Json = nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);
/// Hash of grid shape, extents and raw value bits.
std::string field_digest(const Field& f);

Json grid_json(const Grid& g);
Json to_json(const EigSolveReport& r);
Json to_json(const ConcavityReport& r, const Field& q1, const Field& q2);
Json logistic_sidecar(const LogisticProblem& problem, const LogisticSolution& s);
Json to_json(const InverseResult& r);
Json to_json(const Table& t);
Json to_json(const ConvergenceStudy& s);
Json to_json(const MultiEigReport& r);

void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);

}  // namespace invspec::cli
