// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "invspec/cli/config.hpp"

#include <iosfwd>

namespace invspec::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 2,
  kSolverFailure = 3,
  kConfigError = 4,
};

/// Executes one command, writing artifacts into the resolved output
/// directory. Human-readable progress goes to `log`; the return value is the
/// process exit code.
int run(const RunConfig& config, std::ostream& log);

}  // namespace invspec::cli
