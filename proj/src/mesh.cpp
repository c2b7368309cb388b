// Copyright The invspec Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "invspec/mesh.hpp"

#include "invspec/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace invspec {

double Grid::coordinate(Eigen::Index k, int axis) const {
  const Eigen::Index i = axis == 0 ? k % n_[0] : k / n_[0];
  return lo_[axis] + static_cast<double>(i + 1) * h_[axis];
}

Grid build_grid(int dim, const std::array<std::pair<double, double>, 2>& extents,
                const std::array<int, 2>& n_per_axis) {
  if (dim != 1 && dim != 2) {
    throw ConfigError("grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  Grid g;
  g.dim_ = dim;
  g.weight_ = 1.0;
  g.size_ = 1;
  for (int a = 0; a < dim; ++a) {
    const auto [lo, hi] = extents[a];
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
      throw ConfigError("degenerate extent on axis " + std::to_string(a));
    }
    if (n_per_axis[a] < 3) {
      throw ConfigError("need at least 3 interior nodes per axis");
    }
    g.lo_[a] = lo;
    g.hi_[a] = hi;
    g.n_[a] = n_per_axis[a];
    g.h_[a] = (hi - lo) / (n_per_axis[a] + 1);
    g.weight_ *= g.h_[a];
    g.size_ *= n_per_axis[a];
  }
  return g;
}

Grid unit_grid(int dim, int n) {
  return build_grid(dim, {{{0.0, 1.0}, {0.0, 1.0}}}, {n, n});
}

Field::Field(const Grid& g, Vector v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ConfigError("field length " + std::to_string(values.size()) +
                      " does not match grid size " + std::to_string(grid.size()));
  }
}

Field Field::constant(const Grid& g, double c) {
  return Field(g, Vector::Constant(g.size(), c));
}

Field Field::sample(const Grid& g, const std::function<double(double, double)>& fn) {
  Field f(g);
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const double x = g.coordinate(k, 0);
    const double y = g.dim() == 2 ? g.coordinate(k, 1) : 0.0;
    f.values[k] = fn(x, y);
  }
  require_finite(f, "sampled field");
  return f;
}

void require_same_grid(const Field& f, const Field& g) {
  if (!(f.grid == g.grid)) throw GridMismatch();
}

void require_finite(const Field& f, const char* what) {
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    if (!std::isfinite(f.values[k])) {
      throw NumericError(std::string(what) + " is not finite", static_cast<std::size_t>(k));
    }
  }
}

Field operator+(const Field& f, const Field& g) {
  require_same_grid(f, g);
  return Field(f.grid, f.values + g.values);
}

Field operator-(const Field& f, const Field& g) {
  require_same_grid(f, g);
  return Field(f.grid, f.values - g.values);
}

Field operator*(double a, const Field& f) { return Field(f.grid, a * f.values); }

Field operator+(const Field& f, double c) {
  return Field(f.grid, f.values.array() + c);
}

double inner_product(const Field& f, const Field& g) {
  require_same_grid(f, g);
  return f.grid.weight() * f.values.dot(g.values);
}

double lp_norm(const Field& f, double p) {
  if (!std::isfinite(p) || p < 1.0) {
    throw ConfigError("L^p norm needs finite p >= 1");
  }
  if (p == 2.0) return std::sqrt(f.grid.weight() * f.values.squaredNorm());
  const double s = f.values.array().abs().pow(p).sum();
  return std::pow(f.grid.weight() * s, 1.0 / p);
}

double l2_norm(const Field& f) { return lp_norm(f, 2.0); }

double max_abs(const Field& f) {
  return f.size() == 0 ? 0.0 : f.values.cwiseAbs().maxCoeff();
}

Field map_pointwise(const Field& f, const std::function<double(double)>& fn) {
  Field out(f.grid);
  for (Eigen::Index k = 0; k < f.size(); ++k) out.values[k] = fn(f.values[k]);
  require_finite(out, "map_pointwise result");
  return out;
}

Field lincomb(double alpha, const Field& f, double beta, const Field& g) {
  require_same_grid(f, g);
  Field out(f.grid, alpha * f.values + beta * g.values);
  require_finite(out, "lincomb result");
  return out;
}

Field restrict_to_coarse(const Field& f, const Grid& coarse) {
  const Grid& fine = f.grid;
  if (fine.dim() != coarse.dim()) throw ConfigError("restriction across dimensions");
  std::array<int, 2> ratio{1, 1};
  for (int a = 0; a < fine.dim(); ++a) {
    if (fine.lower(a) != coarse.lower(a) || fine.upper(a) != coarse.upper(a) ||
        (fine.n(a) + 1) % (coarse.n(a) + 1) != 0) {
      throw ConfigError("grids are not nested");
    }
    ratio[a] = (fine.n(a) + 1) / (coarse.n(a) + 1);
  }
  Field out(coarse);
  const int ny = coarse.dim() == 2 ? coarse.n(1) : 1;
  for (int j = 0; j < ny; ++j) {
    const int fj = coarse.dim() == 2 ? (j + 1) * ratio[1] - 1 : 0;
    for (int i = 0; i < coarse.n(0); ++i) {
      out.values[coarse.index(i, j)] = f.values[fine.index((i + 1) * ratio[0] - 1, fj)];
    }
  }
  return out;
}

void write_field_csv(std::ostream& os, const Field& f) {
  const Grid& g = f.grid;
  os << std::setprecision(17);
  os << "# " << g.dim() << ", " << g.n(0);
  if (g.dim() == 2) os << 'x' << g.n(1);
  os << ", " << g.lower(0) << ':' << g.upper(0);
  if (g.dim() == 2) os << 'x' << g.lower(1) << ':' << g.upper(1);
  os << '\n';
  for (Eigen::Index k = 0; k < f.size(); ++k) os << f.values[k] << '\n';
}

void write_field_csv(const std::string& path, const Field& f) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_field_csv(os, f);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

Field read_field_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("#", 0) != 0) {
    throw ConfigError("field CSV: missing '# dim, n_per_axis, extents' header");
  }
  const auto cols = split(header.substr(1), ',');
  if (cols.size() != 3) throw ConfigError("field CSV: malformed header '" + header + "'");
  try {
    const int dim = std::stoi(cols[0]);
    const auto ns = split(cols[1], 'x');
    const auto exts = split(cols[2], 'x');
    if (static_cast<int>(ns.size()) != dim || static_cast<int>(exts.size()) != dim) {
      throw ConfigError("field CSV: header does not match dimension");
    }
    std::array<int, 2> n{1, 1};
    std::array<std::pair<double, double>, 2> ext{};
    for (int a = 0; a < dim; ++a) {
      n[a] = std::stoi(ns[a]);
      const auto ab = split(exts[a], ':');
      if (ab.size() != 2) throw ConfigError("field CSV: extent must be a:b");
      ext[a] = {std::stod(ab[0]), std::stod(ab[1])};
    }
    const Grid g = build_grid(dim, ext, n);
    Field f(g);
    std::string line;
    Eigen::Index k = 0;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      if (k >= g.size()) throw ConfigError("field CSV: too many values");
      f.values[k++] = std::stod(line);
    }
    if (k != g.size()) throw ConfigError("field CSV: too few values");
    require_finite(f, "field CSV value");
    return f;
  } catch (const std::invalid_argument&) {
    throw ConfigError("field CSV: unparsable number");
  } catch (const std::out_of_range&) {
    throw ConfigError("field CSV: number out of range");
  }
}

Field read_field_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open field CSV " + path);
  return read_field_csv(is);
}

}  // namespace invspec
