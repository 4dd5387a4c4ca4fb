#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "nehari/grid.hpp"
#include "nehari/problem.hpp"

namespace nehari {

// Max interior defect of the second-order difference scheme:
//   |(-u_{i-1} + 2u_i - u_{i+1})/h^2 - g(t_i) f(u_i)|.
inline double residual(const Problem& p, const GridFunction& u) {
  check_same_grid(u, p.g.as_grid_function(), "residual");
  const int n = u.grid().n;
  const double h2 = u.grid().h * u.grid().h;
  double worst = 0.0;
  for (int i = 1; i < n; ++i) {
    const double lhs = (-u[i - 1] + 2.0 * u[i] - u[i + 1]) / h2;
    worst = std::max(worst, std::abs(lhs - p.g[i] * p.f.f(u[i])));
  }
  return worst;
}

struct ShootingResult {
  double slope = 0.0;       // u'(0)
  GridFunction u;           // integrated profile on the problem grid
  double boundary_miss = 0.0;  // |u(1)|
};

namespace detail {

struct Trajectory {
  std::vector<double> u;  // on the fine grid
  double terminal = 0.0;
  bool clamped = false;
};

// Classic fourth-order one-step integration of u'' = -g(t) f(u) from
// u(0)=0, u'(0)=slope, at `refine` times the problem resolution. Arguments
// beyond domain_max are clamped and the trajectory flagged invalid.
inline Trajectory integrate_shot(const Problem& p, double slope, int refine) {
  const int fine_n = p.grid.n * refine;
  const double h = 1.0 / fine_n;
  Trajectory out;
  out.u.resize(static_cast<std::size_t>(fine_n) + 1);
  auto rhs = [&](double t, double u) {
    double x = u;
    if (std::abs(x) > p.f.domain_max) {
      out.clamped = true;
      x = std::copysign(p.f.domain_max, x);
    }
    return -p.g.eval(t) * p.f.f(x);
  };
  double u = 0.0, v = slope;
  out.u[0] = 0.0;
  for (int k = 0; k < fine_n; ++k) {
    const double t = k * h;
    const double k1u = v, k1v = rhs(t, u);
    const double k2u = v + 0.5 * h * k1v, k2v = rhs(t + 0.5 * h, u + 0.5 * h * k1u);
    const double k3u = v + 0.5 * h * k2v, k3v = rhs(t + 0.5 * h, u + 0.5 * h * k2u);
    const double k4u = v + h * k3v, k4v = rhs(t + h, u + h * k3u);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    out.u[static_cast<std::size_t>(k) + 1] = u;
  }
  out.terminal = u;
  return out;
}

inline GridFunction downsample(const Problem& p, const std::vector<double>& fine,
                               int refine) {
  GridFunction u = GridFunction::zeros(p.grid);
  for (int i = 0; i <= p.grid.n; ++i)
    u[i] = fine[static_cast<std::size_t>(i) * refine];
  u[0] = 0.0;
  return u;
}

}  // namespace detail

// Scans u'(0) over the given range, brackets sign changes of u(1), and
// refines each bracket by bisection until |u(1)| <= 1e-10. Trajectories
// that hit the nonlinearity clamp are discarded. An empty result means no
// root in range.
inline std::vector<ShootingResult> shoot(const Problem& p,
                                         std::pair<double, double> slope_range,
                                         int steps, int refine = 4) {
  const auto [lo, hi] = slope_range;
  if (!(lo < hi)) throw std::invalid_argument("shoot: empty slope range");
  if (steps < 2) throw std::invalid_argument("shoot: need at least 2 steps");
  std::vector<ShootingResult> roots;
  double prev_slope = 0.0, prev_val = 0.0;
  bool have_prev = false, prev_clamped = true;
  for (int j = 1; j <= steps; ++j) {
    const double sigma = lo + (hi - lo) * j / steps;
    detail::Trajectory traj = detail::integrate_shot(p, sigma, refine);
    if (have_prev && !prev_clamped && !traj.clamped &&
        prev_val * traj.terminal < 0.0) {
      double sa = prev_slope, sb = sigma, va = prev_val;
      detail::Trajectory best = traj;
      double best_slope = sigma;
      for (int it = 0; it < 200 && std::abs(best.terminal) > 1e-10; ++it) {
        const double sm = 0.5 * (sa + sb);
        detail::Trajectory mid = detail::integrate_shot(p, sm, refine);
        if (mid.clamped) break;
        if (std::abs(mid.terminal) < std::abs(best.terminal)) {
          best = mid;
          best_slope = sm;
        }
        if (va * mid.terminal <= 0.0)
          sb = sm;
        else
          sa = sm, va = mid.terminal;
      }
      if (!best.clamped && std::abs(best.terminal) <= 1e-10) {
        ShootingResult res{best_slope, detail::downsample(p, best.u, refine),
                           std::abs(best.terminal)};
        roots.push_back(std::move(res));
      }
    }
    prev_slope = sigma;
    prev_val = traj.terminal;
    prev_clamped = traj.clamped;
    have_prev = true;
  }
  return roots;
}

// Sup-norm distance between two profiles on the same grid.
inline double compare(const GridFunction& a, const GridFunction& b) {
  check_same_grid(a, b, "compare");
  double worst = 0.0;
  for (int i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace nehari
