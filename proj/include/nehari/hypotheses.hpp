#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "nehari/cone.hpp"
#include "nehari/energy.hpp"
#include "nehari/nehari_set.hpp"
#include "nehari/problem.hpp"
#include "nehari/sampling.hpp"

namespace nehari {

struct WeightConstants {
  double A_tilde = 0.0;  // sqrt of the integral of g^2
  double B_tilde = 0.0;  // integral of g over [0, beta]
  double C_tilde = 0.0;  // integral of g over [beta, 1/2]
};

inline WeightConstants compute_constants(const WeightFunction& g, double beta) {
  if (!(beta > 0.0 && beta < 0.25))
    throw std::invalid_argument("compute_constants: beta outside (0, 1/4)");
  GridFunction g2 = GridFunction::zeros(g.grid());
  for (int i = 0; i < g2.size(); ++i) g2[i] = g[i] * g[i];
  WeightConstants out;
  out.A_tilde = std::sqrt(std::max(quadrature(g2), 0.0));
  out.B_tilde = quadrature_between(g.as_grid_function(), 0.0, beta);
  out.C_tilde = quadrature_between(g.as_grid_function(), beta, 0.5);
  return out;
}

// Sample points for the pointwise conditions on f: a uniform grid of
// (lo, hi] plus log-spaced refinement toward the left endpoint.
namespace detail {
inline std::vector<double> condition_grid(double lo, double hi, int points) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(points) + 24);
  for (int j = 1; j <= points; ++j)
    xs.push_back(lo + (hi - lo) * j / points);
  double offset = (hi - lo) / points;
  for (int j = 0; j < 24; ++j, offset *= 0.5)
    xs.push_back(lo + offset);
  std::sort(xs.begin(), xs.end());
  return xs;
}
// Rounding slack for nonstrict grid inequalities that sit exactly at zero.
inline double rounding_slack(double scale) {
  return 1e-12 * std::max(1.0, scale);
}
}  // namespace detail

struct H1Result {
  bool pass = false;
  double left_margin = 0.0;   // pi/A - f(r)/r
  double right_margin = 0.0;  // f(R phi(beta))/R - 1/(2 phi(beta) C)
  std::string reason;
};

inline H1Result check_H1(const Problem& p, const AnnulusSpec& a) {
  H1Result out;
  const WeightConstants c = compute_constants(p.g, a.beta);
  if (!(c.A_tilde > 0.0) || !(c.C_tilde > 0.0)) {
    out.reason = !(c.C_tilde > 0.0) ? "C tilde = 0" : "A tilde = 0";
    out.left_margin = -std::numeric_limits<double>::infinity();
    out.right_margin = -std::numeric_limits<double>::infinity();
    return out;
  }
  const double pb = phi(a.beta);
  out.left_margin = std::numbers::pi / c.A_tilde - p.f.f(a.r) / a.r;
  out.right_margin = p.f.f(a.R * pb) / a.R - 1.0 / (2.0 * pb * c.C_tilde);
  out.pass = out.left_margin > 0.0 && out.right_margin > 0.0;
  return out;
}

struct H2Result {
  bool pass = false;
  double min_margin = 0.0;  // min of t f'(t) - f(t) over [t_floor, R]
  double arg_min = 0.0;
};

// Superlinearity margin m(t) = t f'(t) - f(t), sampled on (0, R] with the
// floor t >= R * 1e-6. The witness function is the expression itself.
// Strict positivity is judged against per-point rounding slack, so a genuine
// margin that vanishes toward 0 (any power law) still passes.
inline H2Result check_H2(const Problem& p, const AnnulusSpec& a,
                         int points = 2000) {
  H2Result out;
  const double floor = a.R * 1e-6;
  out.min_margin = std::numeric_limits<double>::infinity();
  out.pass = true;
  for (double t : detail::condition_grid(0.0, a.R, points)) {
    if (t < floor) continue;
    const double tf1 = t * p.f.f1(t);
    const double f = p.f.f(t);
    const double m = tf1 - f;
    if (m <= detail::rounding_slack(std::abs(tf1) + std::abs(f)))
      out.pass = false;
    if (m < out.min_margin) {
      out.min_margin = m;
      out.arg_min = t;
    }
  }
  return out;
}

struct H3Result {
  bool pass = false;
  double ar_margin = 0.0;      // min of t f'(t) - mu f(t) on [r phi, R]
  double slope_margin = 0.0;   // min of f'(t) - lambda on [r phi, R]
  double budget_margin = 0.0;  // lambda C (1 - 1/mu) r phi - B f(r phi)
  std::string reason;
};

inline H3Result check_H3(const Problem& p, const AnnulusSpec& a, double mu,
                         double lambda, int points = 2000) {
  H3Result out;
  if (!(mu > 1.0)) {
    out.reason = "mu must be > 1";
    return out;
  }
  if (!(lambda > 0.0)) {
    out.reason = "lambda must be > 0";
    return out;
  }
  const WeightConstants c = compute_constants(p.g, a.beta);
  const double lo = a.r * phi(a.beta), hi = a.R;
  out.ar_margin = std::numeric_limits<double>::infinity();
  out.slope_margin = std::numeric_limits<double>::infinity();
  bool ar_ok = true, slope_ok = true;
  auto visit = [&](double t) {
    const double d1 = p.f.f1(t);
    const double f = p.f.f(t);
    const double ar = t * d1 - mu * f;
    if (ar < -detail::rounding_slack(std::abs(t * d1) + mu * std::abs(f)))
      ar_ok = false;
    out.ar_margin = std::min(out.ar_margin, ar);
    const double sl = d1 - lambda;
    if (sl < -detail::rounding_slack(std::abs(d1) + lambda)) slope_ok = false;
    out.slope_margin = std::min(out.slope_margin, sl);
  };
  for (double t : detail::condition_grid(lo, hi, points))
    if (t >= lo) visit(t);
  visit(lo);
  out.budget_margin = lambda * c.C_tilde * (1.0 - 1.0 / mu) * a.r * phi(a.beta) -
                      c.B_tilde * p.f.f(a.r * phi(a.beta));
  out.pass = ar_ok && slope_ok && out.budget_margin > 0.0;
  return out;
}

struct H4Result {
  bool pass = false;
  double support_defect = 0.0;  // max |g| over nodes in [0, beta]
  double convexity_lower = 0.0;  // min f'' on [r phi, R]  (the constant M)
  double ar_lower = 0.0;         // min t f' - f on [r phi, R]
  std::string reason;
};

inline H4Result check_H4(const Problem& p, const AnnulusSpec& a,
                         int points = 2000) {
  H4Result out;
  for (int i = 0; i <= p.grid.n; ++i) {
    if (p.grid.node(i) > a.beta) break;
    out.support_defect = std::max(out.support_defect, std::abs(p.g[i]));
  }
  const double lo = a.r * phi(a.beta), hi = a.R;
  out.convexity_lower = std::numeric_limits<double>::infinity();
  out.ar_lower = std::numeric_limits<double>::infinity();
  auto visit = [&](double t) {
    out.convexity_lower = std::min(out.convexity_lower, p.f.f2(t));
    out.ar_lower = std::min(out.ar_lower, t * p.f.f1(t) - p.f.f(t));
  };
  for (double t : detail::condition_grid(lo, hi, points))
    if (t >= lo) visit(t);
  visit(lo);
  if (out.support_defect > 1e-12) out.reason = "g does not vanish on [0,beta]";
  out.pass = out.support_defect <= 1e-12 && out.convexity_lower > 0.0 &&
             out.ar_lower > 0.0;
  return out;
}

struct AbstractConstants {
  double C1_estimate = 0.0;  // max sampled operator norm of E''(u)
  double C2_estimate = 0.0;  // min sampled |E''(u)(u,u)|
  bool hessian_sign_negative = true;  // E''(u)(u,u) < 0 at every sample
  int samples = 0;
};

namespace detail {
// H01 operator norm of E''(u) estimated by power iteration on the
// self-adjoint map w -> w - J^{-1}(g f'(u) w).
inline double hessian_operator_norm(const Problem& p, const GridFunction& u,
                                    std::mt19937_64& rng, int iters = 30) {
  GridFunction q = GridFunction::zeros(u.grid());
  for (int i = 0; i < u.size(); ++i) q[i] = p.g[i] * p.f.f1(u[i]);
  GridFunction w = random_sine_series(u.grid(), rng);
  double norm = h01_norm(w);
  if (norm == 0.0) w = sample_sin_pi(u.grid()), norm = h01_norm(w);
  w = (1.0 / norm) * w;
  double rayleigh = 0.0;
  for (int k = 0; k < iters; ++k) {
    GridFunction qw = GridFunction::zeros(u.grid());
    for (int i = 0; i < u.size(); ++i) qw[i] = q[i] * w[i];
    GridFunction bw = w - apply_inverse_laplacian(qw);
    const double bn = h01_norm(bw);
    if (bn == 0.0) return 0.0;
    rayleigh = std::abs(h01_inner(bw, w));
    w = (1.0 / bn) * bw;
  }
  return rayleigh;
}
}  // namespace detail

// Sampled bounds for the abstract curvature constants: C1 bounds |E''(u)|
// from below by the largest sampled operator norm (power iteration plus
// random unit pairs), C2 by the smallest sampled |E''(u)(u,u)|. Sample
// points are projections of random cone elements; the canonical sine
// profile is always included.
inline AbstractConstants estimate_abstract_constants(const Problem& p,
                                                     const AnnulusSpec& a,
                                                     int samples,
                                                     std::uint64_t seed) {
  if (samples < 1)
    throw std::invalid_argument("estimate_abstract_constants: samples >= 1");
  std::mt19937_64 rng(seed);
  AbstractConstants out;
  out.C2_estimate = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    GridFunction shape = k == 0 ? sample_sin_pi(p.grid)
                                : random_cone_element(p.grid, rng);
    GridFunction u = project(p, shape, a);
    const double huu = hessian_form(p, u, u, u);
    out.C2_estimate = std::min(out.C2_estimate, std::abs(huu));
    if (huu >= 0.0) out.hessian_sign_negative = false;
    double c1 = detail::hessian_operator_norm(p, u, rng);
    const GridFunction uhat = (1.0 / h01_norm(u)) * u;
    c1 = std::max(c1, std::abs(hessian_form(p, u, uhat, uhat)));
    for (int pair = 0; pair < 5; ++pair) {
      GridFunction w1 = random_sine_series(p.grid, rng);
      GridFunction w2 = random_sine_series(p.grid, rng);
      const double n1 = h01_norm(w1), n2 = h01_norm(w2);
      if (n1 == 0.0 || n2 == 0.0) continue;
      c1 = std::max(c1, std::abs(hessian_form(p, u, (1.0 / n1) * w1,
                                              (1.0 / n2) * w2)));
    }
    out.C1_estimate = std::max(out.C1_estimate, c1);
    ++out.samples;
  }
  return out;
}

struct SampledH1 {
  bool pass = false;
  int samples = 0;
  double min_left_value = 0.0;   // smallest fiber derivative left of the root
  double max_right_value = 0.0;  // largest fiber derivative right of the root
  std::string reason;
};

// Sampled evidence for the fiber sign pattern: for each random cone element
// the scaling root exists and the derivative keeps strict signs on a dense
// scan of both bracket sides.
inline SampledH1 sample_h1(const Problem& p, const AnnulusSpec& a, int samples,
                           std::uint64_t seed, int scan_points = 50) {
  std::mt19937_64 rng(seed);
  SampledH1 out;
  out.min_left_value = std::numeric_limits<double>::infinity();
  out.max_right_value = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    GridFunction u = k == 0 ? sample_sin_pi(p.grid)
                            : random_cone_element(p.grid, rng);
    const double norm = h01_norm(u);
    FiberRootResult root;
    try {
      root = nehari_scale(p, u, a);
    } catch (const SignPatternViolation& e) {
      out.reason = "sample " + std::to_string(k) + ": " + e.what();
      return out;
    }
    const double lo = a.r / norm, hi = a.R / norm;
    const double delta = 1e-6 * (a.R - a.r) / norm;
    for (int j = 0; j < scan_points; ++j) {
      const double tl =
          lo + (root.s_value - delta - lo) * j / (scan_points - 1);
      const double vl = fiber_derivative(p, u, tl);
      out.min_left_value = std::min(out.min_left_value, vl);
      const double tr =
          root.s_value + delta + (hi - root.s_value - delta) * j /
                                      (scan_points - 1);
      const double vr = fiber_derivative(p, u, tr);
      out.max_right_value = std::max(out.max_right_value, vr);
      if (vl <= 0.0 || vr >= 0.0) {
        out.reason = "sample " + std::to_string(k) +
                     ": sign pattern broken in the scan";
        return out;
      }
    }
    ++out.samples;
  }
  out.pass = true;
  return out;
}

enum class HMode { H2, H3, H4 };

inline const char* to_string(HMode m) {
  switch (m) {
    case HMode::H2: return "H2";
    case HMode::H3: return "H3";
    case HMode::H4: return "H4";
  }
  return "?";
}

struct CertifyOptions {
  HMode mode = HMode::H2;
  double mu = 0.0;      // H3 only
  double lambda = 0.0;  // H3 only
  bool search_mu_lambda = false;
  int samples = 20;
  std::uint64_t seed = 1;
};

struct HypothesisReport {
  WeightConstants constants;
  H1Result h1;
  HMode requested_mode = HMode::H2;
  bool mode_pass = false;  // requested condition holds; "which" is none otherwise
  std::optional<H2Result> h2;
  std::optional<H3Result> h3;
  std::optional<H4Result> h4;
  double mu_used = 0.0;
  double lambda_used = 0.0;
  std::optional<SampledH1> sampled_h1;
  std::optional<AbstractConstants> abstract_constants;
  bool passes = false;
};

// Grid search for the superlinearity constants: lambda is the smallest
// sampled slope, mu the smallest sampled ratio t f'/f capped at 10.
inline std::pair<double, double> search_h3_constants(const Problem& p,
                                                     const AnnulusSpec& a,
                                                     int points = 2000) {
  const double lo = a.r * phi(a.beta), hi = a.R;
  double lambda = std::numeric_limits<double>::infinity();
  double mu = 10.0;
  auto visit = [&](double t) {
    const double d1 = p.f.f1(t);
    lambda = std::min(lambda, d1);
    const double f = p.f.f(t);
    if (f > 0.0) mu = std::min(mu, t * d1 / f);
  };
  for (double t : detail::condition_grid(lo, hi, points)) visit(t);
  visit(lo);
  return {mu, lambda};
}

// Full certification for one annulus: weight constants, the endpoint
// inequality, the requested superlinearity condition, and (when those hold)
// sampled evidence for the fiber sign pattern and the curvature bounds.
inline HypothesisReport certify(const Problem& p, const AnnulusSpec& a,
                                const CertifyOptions& opts = {}) {
  if (p.f.domain_max < a.R)
    throw DomainError("certify: domain_max smaller than the outer radius");
  HypothesisReport rep;
  rep.constants = compute_constants(p.g, a.beta);
  rep.h1 = check_H1(p, a);
  rep.requested_mode = opts.mode;
  switch (opts.mode) {
    case HMode::H2:
      rep.h2 = check_H2(p, a);
      rep.mode_pass = rep.h2->pass;
      break;
    case HMode::H3: {
      double mu = opts.mu, lambda = opts.lambda;
      if (opts.search_mu_lambda) {
        auto [m, l] = search_h3_constants(p, a);
        mu = m;
        lambda = l;
      }
      rep.mu_used = mu;
      rep.lambda_used = lambda;
      rep.h3 = check_H3(p, a, mu, lambda);
      rep.mode_pass = rep.h3->pass;
      break;
    }
    case HMode::H4:
      rep.h4 = check_H4(p, a);
      rep.mode_pass = rep.h4->pass;
      break;
  }
  if (rep.h1.pass && rep.mode_pass) {
    rep.sampled_h1 = sample_h1(p, a, opts.samples, opts.seed);
    if (rep.sampled_h1->pass)
      rep.abstract_constants =
          estimate_abstract_constants(p, a, opts.samples, opts.seed + 1);
  }
  rep.passes = rep.h1.pass && rep.mode_pass && rep.sampled_h1 &&
               rep.sampled_h1->pass && rep.abstract_constants &&
               rep.abstract_constants->C2_estimate > 0.0;
  return rep;
}

}  // namespace nehari
