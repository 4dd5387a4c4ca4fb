#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "nehari/errors.hpp"

namespace nehari {

// Uniform grid on [0,1] with n cells and nodes t_i = i/n.
struct Grid {
  int n = 0;
  double h = 0.0;

  explicit Grid(int cells) : n(cells), h(1.0 / cells) {
    if (cells < 2) throw std::invalid_argument("Grid: cell count must be >= 2");
  }

  double node(int i) const { return static_cast<double>(i) / n; }
  int node_count() const { return n + 1; }

  friend bool operator==(const Grid& a, const Grid& b) { return a.n == b.n; }
  friend bool operator!=(const Grid& a, const Grid& b) { return a.n != b.n; }
};

// Nodal values on a Grid. Elements of the Dirichlet space carry exact zeros
// at both endpoints; general source terms need not.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values)
      : grid_(grid), v_(std::move(values)) {
    if (static_cast<int>(v_.size()) != grid_.node_count())
      throw std::invalid_argument("GridFunction: value count != node count");
  }

  static GridFunction zeros(Grid grid) {
    return GridFunction(grid, std::vector<double>(grid.node_count(), 0.0));
  }

  static GridFunction sample(Grid grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.node_count());
    for (int i = 0; i <= grid.n; ++i) v[i] = f(grid.node(i));
    return GridFunction(grid, std::move(v));
  }

  // Samples f and pins both endpoints to exact zeros.
  static GridFunction sample_dirichlet(Grid grid,
                                       const std::function<double(double)>& f) {
    GridFunction u = sample(grid, f);
    u.v_.front() = 0.0;
    u.v_.back() = 0.0;
    return u;
  }

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }
  double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(v_.size()); }

 private:
  Grid grid_;
  std::vector<double> v_;
};

inline void check_same_grid(const GridFunction& u, const GridFunction& v,
                            const char* where) {
  if (u.grid() != v.grid())
    throw GridMismatch(std::string(where) + ": operands on different grids");
}

inline GridFunction operator*(double k, const GridFunction& u) {
  GridFunction w = u;
  for (double& x : w.values()) x *= k;
  return w;
}

inline GridFunction operator+(const GridFunction& u, const GridFunction& v) {
  check_same_grid(u, v, "operator+");
  GridFunction w = u;
  for (int i = 0; i < w.size(); ++i) w[i] += v[i];
  return w;
}

inline GridFunction operator-(const GridFunction& u, const GridFunction& v) {
  check_same_grid(u, v, "operator-");
  GridFunction w = u;
  for (int i = 0; i < w.size(); ++i) w[i] -= v[i];
  return w;
}

// u + k*v without a temporary per element.
inline GridFunction add_scaled(const GridFunction& u, double k,
                               const GridFunction& v) {
  check_same_grid(u, v, "add_scaled");
  GridFunction w = u;
  for (int i = 0; i < w.size(); ++i) w[i] += k * v[i];
  return w;
}

// (u,v) in H_0^1: integral of the interpolants' derivatives, computed from
// cell-wise difference quotients. Exact for piecewise-linear nodal data.
inline double h01_inner(const GridFunction& u, const GridFunction& v) {
  check_same_grid(u, v, "h01_inner");
  const int n = u.grid().n;
  const double h = u.grid().h;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += (u[i + 1] - u[i]) * (v[i + 1] - v[i]);
  return acc / h;
}

inline double h01_norm(const GridFunction& u) {
  return std::sqrt(h01_inner(u, u));
}

// Composite trapezoid value of the integral of u*v.
inline double l2_inner(const GridFunction& u, const GridFunction& v) {
  check_same_grid(u, v, "l2_inner");
  const int n = u.grid().n;
  double acc = 0.5 * (u[0] * v[0] + u[n] * v[n]);
  for (int i = 1; i < n; ++i) acc += u[i] * v[i];
  return acc * u.grid().h;
}

inline double sup_norm(const GridFunction& u) {
  double m = 0.0;
  for (double x : u.values()) m = std::max(m, std::abs(x));
  return m;
}

// Composite trapezoid integral over [0,1].
inline double quadrature(const GridFunction& w) {
  const int n = w.grid().n;
  double acc = 0.5 * (w[0] + w[n]);
  for (int i = 1; i < n; ++i) acc += w[i];
  return acc * w.grid().h;
}

namespace detail {
// Value of the piecewise-linear interpolant of w at t.
inline double interp(const GridFunction& w, double t) {
  const int n = w.grid().n;
  const double h = w.grid().h;
  if (t <= 0.0) return w[0];
  if (t >= 1.0) return w[n];
  int i = std::min(static_cast<int>(t / h), n - 1);
  double lam = (t - w.grid().node(i)) / h;
  return (1.0 - lam) * w[i] + lam * w[i + 1];
}
}  // namespace detail

// Integral of the piecewise-linear interpolant of w over [x1,x2] subset of
// [0,1]; cells cut by x1 or x2 are clipped with interpolated endpoint values.
inline double quadrature_between(const GridFunction& w, double x1, double x2) {
  if (x1 > x2) throw std::invalid_argument("quadrature_between: x1 > x2");
  x1 = std::max(x1, 0.0);
  x2 = std::min(x2, 1.0);
  if (x1 >= x2) return 0.0;
  const int n = w.grid().n;
  const double h = w.grid().h;
  const int first = std::min(static_cast<int>(x1 / h), n - 1);
  const int last = std::min(static_cast<int>(x2 / h), n - 1);
  double acc = 0.0;
  for (int i = first; i <= last; ++i) {
    const double lo = std::max(x1, w.grid().node(i));
    const double hi = std::min(x2, w.grid().node(i + 1));
    if (hi <= lo) continue;
    acc += 0.5 * (detail::interp(w, lo) + detail::interp(w, hi)) * (hi - lo);
  }
  return acc;
}

}  // namespace nehari
