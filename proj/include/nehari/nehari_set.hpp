#pragma once

#include <cmath>
#include <string>

#include "nehari/energy.hpp"
#include "nehari/grid.hpp"
#include "nehari/problem.hpp"

namespace nehari {

// Annular localization target: energy norms in [r,R], Harnack parameter beta.
struct AnnulusSpec {
  double r;
  double R;
  double beta;

  AnnulusSpec(double r_, double R_, double beta_) : r(r_), R(R_), beta(beta_) {
    if (!(r > 0.0 && r < R && std::isfinite(R)))
      throw std::invalid_argument("AnnulusSpec: need 0 < r < R < inf");
    if (!(beta > 0.0 && beta < 0.25))
      throw std::invalid_argument("AnnulusSpec: beta must lie in (0, 1/4)");
  }
};

struct FiberRootResult {
  double s_value = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  double residual = 0.0;
  // The root landed within 1e-9 of the bracket width from an endpoint; the
  // annulus barely contains the scaled element.
  bool near_endpoint = false;
};

// d/dtau E(tau u) = tau |u|^2 - integral of g * f(tau u) * u.
inline double fiber_derivative(const Problem& p, const GridFunction& u,
                               double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("fiber_derivative: tau <= 0");
  check_same_grid(u, p.g.as_grid_function(), "fiber_derivative");
  GridFunction integrand = GridFunction::zeros(u.grid());
  for (int i = 0; i < u.size(); ++i) {
    const double x = tau * u[i];
    if (std::abs(x) > p.f.domain_max)
      throw DomainError("fiber_derivative: tau*u exceeds domain_max");
    integrand[i] = p.g[i] * p.f.f(x) * u[i];
  }
  return tau * h01_inner(u, u) - quadrature(integrand);
}

// Unique sign-change root of the fiber derivative inside
// (r/|u|, R/|u|), found by bisection with secant refinement. Preconditions
// follow the annulus sign pattern: positive at the left endpoint, negative
// at the right one; any other sign combination is reported, not ignored.
inline FiberRootResult nehari_scale(const Problem& p, const GridFunction& u,
                                    const AnnulusSpec& a) {
  const double norm2 = h01_inner(u, u);
  if (!(norm2 > 0.0))
    throw std::invalid_argument("nehari_scale: zero element");
  const double norm = std::sqrt(norm2);
  const double lo = a.r / norm, hi = a.R / norm;
  const double tol_root = 1e-12 * norm2;

  double fa = fiber_derivative(p, u, lo);
  double fb = fiber_derivative(p, u, hi);
  if (!(fa > 0.0))
    throw SignPatternViolation(
        "nehari_scale: fiber derivative not positive at r/|u| (value " +
        std::to_string(fa) + ")");
  if (!(fb < 0.0))
    throw SignPatternViolation(
        "nehari_scale: fiber derivative not negative at R/|u| (value " +
        std::to_string(fb) + ")");

  FiberRootResult out;
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  double A = lo, B = hi;
  double x = 0.5 * (lo + hi), fx = 0.0;
  int side = 0, stall = 0;
  int it = 0;
  for (; it < 200; ++it) {
    double cand = B - fb * (B - A) / (fb - fa);
    const double width = B - A;
    // Fall back to bisection when the secant step leaves the bracket or the
    // same side updated twice in a row (one-sided stall).
    if (!std::isfinite(cand) || cand <= A + 1e-6 * width ||
        cand >= B - 1e-6 * width || stall >= 2) {
      cand = 0.5 * (A + B);
      stall = 0;
    }
    x = cand;
    fx = fiber_derivative(p, u, x);
    if (std::abs(fx) <= tol_root) break;
    const int hit = fx > 0.0 ? -1 : +1;
    stall = (hit == side) ? stall + 1 : 0;
    side = hit;
    if (fx > 0.0) {
      A = x;
      fa = fx;
    } else {
      B = x;
      fb = fx;
    }
  }
  if (std::abs(fx) > tol_root)
    throw std::runtime_error("nehari_scale: root refinement exhausted");
  out.s_value = x;
  out.iterations = it + 1;
  out.residual = fx;
  const double width = hi - lo;
  out.near_endpoint = (x - lo) < 1e-9 * width || (hi - x) < 1e-9 * width;
  return out;
}

// Projection onto the Nehari set: u -> s(u) u.
inline GridFunction project(const Problem& p, const GridFunction& u,
                            const AnnulusSpec& a) {
  return nehari_scale(p, u, a).s_value * u;
}

// Directional derivative of the scaling map at u on the manifold:
//   -(E''(u)(u,v) + (E'(u),v)) / E''(u)(u,u).
inline double scale_directional_derivative(const Problem& p,
                                           const GridFunction& u,
                                           const GridFunction& v) {
  const double norm2 = h01_inner(u, u);
  const GridFunction grad = gradient(p, u);
  if (std::abs(h01_inner(grad, u)) > 1e-6 * norm2)
    throw std::invalid_argument(
        "scale_directional_derivative: u is not on the manifold");
  const double denom = hessian_form(p, u, u, u);
  if (std::abs(denom) < 1e-10 * norm2)
    throw DegenerateHessian(
        "scale_directional_derivative: |E''(u)(u,u)| below 1e-10|u|^2");
  return -(hessian_form(p, u, u, v) + h01_inner(grad, v)) / denom;
}

// Membership in the annular Nehari set at relative tolerance tol.
inline bool on_manifold(const Problem& p, const GridFunction& u,
                        const AnnulusSpec& a, double tol) {
  const double norm2 = h01_inner(u, u);
  const double norm = std::sqrt(norm2);
  if (norm < a.r || norm > a.R) return false;
  return std::abs(h01_inner(gradient(p, u), u)) <= tol * norm2;
}

}  // namespace nehari
