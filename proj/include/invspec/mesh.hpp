// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>

namespace invspec {

using Vector = Eigen::VectorXd;

/// Uniform grid on an interval or rectangle. Only interior nodes carry
/// unknowns; boundary values are zero (homogeneous Dirichlet).
class Grid {
public:
  Grid() = default;

  int dim() const { return dim_; }
  /// Interior nodes along `axis`.
  int n(int axis) const { return n_[axis]; }
  double lower(int axis) const { return lo_[axis]; }
  double upper(int axis) const { return hi_[axis]; }
  double spacing(int axis) const { return h_[axis]; }
  /// Cell volume, the quadrature weight of every interior node.
  double weight() const { return weight_; }
  Eigen::Index size() const { return size_; }

  /// Lexicographic node index, x fastest.
  Eigen::Index index(int i, int j = 0) const {
    return static_cast<Eigen::Index>(j) * n_[0] + i;
  }
  /// Coordinate of node `k` along `axis`.
  double coordinate(Eigen::Index k, int axis) const;

  bool operator==(const Grid& other) const = default;

private:
  friend Grid build_grid(int, const std::array<std::pair<double, double>, 2>&,
                         const std::array<int, 2>&);

  int dim_ = 0;
  std::array<double, 2> lo_{0.0, 0.0};
  std::array<double, 2> hi_{0.0, 0.0};
  std::array<int, 2> n_{1, 1};
  std::array<double, 2> h_{1.0, 1.0};
  double weight_ = 0.0;
  Eigen::Index size_ = 0;
};

/// Throws ConfigError on dim outside {1,2}, n < 3 or a degenerate extent.
/// Entries past `dim` are ignored.
Grid build_grid(int dim, const std::array<std::pair<double, double>, 2>& extents,
                const std::array<int, 2>& n_per_axis);

/// Shorthand for the unit interval / unit square with n nodes per axis.
Grid unit_grid(int dim, int n);

/// Grid function sampled at interior nodes.
struct Field {
  Grid grid;
  Vector values;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), values(Vector::Zero(g.size())) {}
  Field(const Grid& g, Vector v);

  static Field constant(const Grid& g, double c);
  /// Samples fn(x, y) at every interior node (y = 0 in 1D).
  static Field sample(const Grid& g, const std::function<double(double, double)>& fn);

  Eigen::Index size() const { return values.size(); }
  double operator[](Eigen::Index k) const { return values[k]; }
  double& operator[](Eigen::Index k) { return values[k]; }

  double min() const { return values.minCoeff(); }
  double max() const { return values.maxCoeff(); }
};

void require_same_grid(const Field& f, const Field& g);
/// Throws NumericError naming the first non-finite node.
void require_finite(const Field& f, const char* what);

Field operator+(const Field& f, const Field& g);
Field operator-(const Field& f, const Field& g);
Field operator*(double a, const Field& f);
Field operator+(const Field& f, double c);

/// weight * sum_i f_i g_i
double inner_product(const Field& f, const Field& g);
/// (weight * sum_i |f_i|^p)^(1/p); p < 1 or non-finite p is a ConfigError.
double lp_norm(const Field& f, double p);
double l2_norm(const Field& f);
double max_abs(const Field& f);

Field map_pointwise(const Field& f, const std::function<double(double)>& fn);
Field lincomb(double alpha, const Field& f, double beta, const Field& g);

/// Injection onto a nested coarser grid: (n_fine + 1) must be a multiple of
/// (n_coarse + 1) on every axis and the extents must agree.
Field restrict_to_coarse(const Field& f, const Grid& coarse);

/// CSV with a `# dim, n_per_axis, extents` header line followed by one value
/// per line in lexicographic order.
void write_field_csv(std::ostream& os, const Field& f);
void write_field_csv(const std::string& path, const Field& f);
Field read_field_csv(std::istream& is);
Field read_field_csv(const std::string& path);

}  // namespace invspec
