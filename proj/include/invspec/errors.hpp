// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace invspec {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, potential descriptor, solver parameter or run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

class GridMismatch : public Error {
public:
  GridMismatch() : Error("fields live on different grids") {}
};

/// A NaN or Inf appeared at an interior node.
class NumericError : public Error {
public:
  NumericError(const std::string& what, std::size_t node)
      : Error(what + " (node " + std::to_string(node) + ")"), node_(node) {}
  std::size_t node() const { return node_; }

private:
  std::size_t node_;
};

/// Iterative method hit its cap or broke down; carries the last residual.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what + " (last residual " + std::to_string(last_residual) + ")"),
        last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

private:
  double last_residual_;
};

/// The computed principal eigenvector changes sign.
class PositivityError : public Error {
public:
  using Error::Error;
};

/// lambda <= lambda_1(q0): the logistic problem has no positive solution.
class NoPositiveSolution : public Error {
public:
  NoPositiveSolution(const std::string& what, double lambda, double lambda1)
      : Error(what), lambda_(lambda), lambda1_(lambda1) {}
  double lambda() const { return lambda_; }
  double lambda1() const { return lambda1_; }

private:
  double lambda_;
  double lambda1_;
};

}  // namespace invspec
