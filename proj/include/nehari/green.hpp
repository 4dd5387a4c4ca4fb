#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nehari/grid.hpp"
#include "nehari/problem.hpp"

namespace nehari {

// Green's function of -d^2/dt^2 with homogeneous Dirichlet conditions.
inline double green_kernel(double t, double s) {
  if (t < 0.0 || t > 1.0 || s < 0.0 || s > 1.0)
    throw DomainError("green_kernel: arguments outside [0,1]");
  return s <= t ? s * (1.0 - t) : t * (1.0 - s);
}

// Solves (-u_{i-1} + 2 u_i - u_{i+1})/h^2 = w_i on interior nodes with
// u_0 = u_n = 0 (Thomas algorithm). Boundary values of w are ignored.
inline GridFunction apply_inverse_laplacian(const GridFunction& w) {
  const int n = w.grid().n;
  const double h2 = w.grid().h * w.grid().h;
  const int m = n - 1;
  std::vector<double> c(m), d(m);
  // Forward sweep for tridiag(-1, 2, -1) u = h^2 w.
  c[0] = -0.5;
  d[0] = 0.5 * h2 * w[1];
  for (int i = 1; i < m; ++i) {
    const double denom = 2.0 + c[i - 1];
    c[i] = -1.0 / denom;
    d[i] = (h2 * w[i + 1] + d[i - 1]) / denom;
  }
  GridFunction u = GridFunction::zeros(w.grid());
  u[m] = d[m - 1];
  for (int i = m - 1; i >= 1; --i) u[i] = d[i - 1] - c[i - 1] * u[i + 1];
  return u;
}

// Trapezoid quadrature of the Green's integral at each node. O(n^2);
// retained as a cross-check oracle for the tridiagonal path.
inline GridFunction apply_inverse_laplacian_kernel(const GridFunction& w) {
  const int n = w.grid().n;
  const double h = w.grid().h;
  GridFunction u = GridFunction::zeros(w.grid());
  for (int i = 1; i < n; ++i) {
    const double ti = w.grid().node(i);
    double acc = 0.5 * (green_kernel(ti, 0.0) * w[0] +
                        green_kernel(ti, 1.0) * w[n]);
    for (int j = 1; j < n; ++j)
      acc += green_kernel(ti, w.grid().node(j)) * w[j];
    u[i] = acc * h;
  }
  return u;
}

namespace detail {
// Nodal values of g * f(u); throws when an iterate leaves the certified range.
inline GridFunction weighted_superposition(const GridFunction& u,
                                           const Nonlinearity& f,
                                           const WeightFunction& g) {
  check_same_grid(u, g.as_grid_function(), "apply_N");
  GridFunction w = GridFunction::zeros(u.grid());
  for (int i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > f.domain_max)
      throw DomainError("apply_N: |u| exceeds domain_max at node " +
                        std::to_string(i));
    w[i] = g[i] * f.f(u[i]);
  }
  return w;
}
}  // namespace detail

// N(u) = J^{-1}(g * f(u)); the fixed-point operator of the problem.
inline GridFunction apply_N(const GridFunction& u, const Nonlinearity& f,
                            const WeightFunction& g) {
  return apply_inverse_laplacian(detail::weighted_superposition(u, f, g));
}

inline GridFunction apply_N(const Problem& p, const GridFunction& u) {
  return apply_N(u, p.f, p.g);
}

}  // namespace nehari
