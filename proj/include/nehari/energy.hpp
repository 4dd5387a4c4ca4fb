#pragma once

#include "nehari/green.hpp"
#include "nehari/grid.hpp"
#include "nehari/problem.hpp"

namespace nehari {

// E(u) = 1/2 |u|^2 - integral of g * F(u), F the antiderivative of f.
inline double energy(const Problem& p, const GridFunction& u) {
  check_same_grid(u, p.g.as_grid_function(), "energy");
  GridFunction integrand = GridFunction::zeros(u.grid());
  for (int i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > p.f.domain_max)
      throw DomainError("energy: |u| exceeds domain_max");
    integrand[i] = p.g[i] * primitive(p.f, u[i]);
  }
  return 0.5 * h01_inner(u, u) - quadrature(integrand);
}

// E'(u) = u - N(u), represented in H_0^1 through the Riesz identification.
inline GridFunction gradient(const Problem& p, const GridFunction& u) {
  return u - apply_N(p, u);
}

// E''(u)(w1,w2) = (w1,w2)_{H_0^1} - integral of g * f'(u) * w1 * w2.
inline double hessian_form(const Problem& p, const GridFunction& u,
                           const GridFunction& w1, const GridFunction& w2) {
  check_same_grid(u, w1, "hessian_form");
  check_same_grid(u, w2, "hessian_form");
  GridFunction integrand = GridFunction::zeros(u.grid());
  for (int i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > p.f.domain_max)
      throw DomainError("hessian_form: |u| exceeds domain_max");
    integrand[i] = p.g[i] * p.f.f1(u[i]) * w1[i] * w2[i];
  }
  return h01_inner(w1, w2) - quadrature(integrand);
}

}  // namespace nehari
