#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "nehari/grid.hpp"

namespace nehari {

namespace detail {

// Adaptive composite Simpson on [a,b].
inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace detail

// Evaluable scalar triple (f, f', f'') with the largest certified argument.
// Built-in families extend oddly to negative arguments so the shooting
// integrator stays defined off the cone.
struct Nonlinearity {
  std::function<double(double)> f;
  std::function<double(double)> f1;
  std::function<double(double)> f2;
  double domain_max = std::numeric_limits<double>::infinity();
  // Optional closed-form antiderivative F(xi) = integral of f over [0,xi].
  std::function<double(double)> antiderivative;

  static Nonlinearity power(double a, double p, double domain_max) {
    if (p < 1.0)
      throw std::invalid_argument("Nonlinearity::power: exponent must be >= 1");
    Nonlinearity nl;
    nl.f = [a, p](double x) {
      return a * std::copysign(std::pow(std::abs(x), p), x);
    };
    nl.f1 = [a, p](double x) { return a * p * std::pow(std::abs(x), p - 1.0); };
    nl.f2 = [a, p](double x) {
      if (p < 2.0 && x == 0.0) return 0.0;
      return a * p * (p - 1.0) *
             std::copysign(std::pow(std::abs(x), p - 2.0), x);
    };
    nl.antiderivative = [a, p](double xi) {
      return a / (p + 1.0) * std::pow(std::abs(xi), p + 1.0);
    };
    nl.domain_max = domain_max;
    return nl;
  }

  static Nonlinearity power_sum(double a, double p, double a2, double p2,
                                double domain_max) {
    Nonlinearity lhs = power(a, p, domain_max);
    Nonlinearity rhs = power(a2, p2, domain_max);
    Nonlinearity nl;
    nl.f = [lhs, rhs](double x) { return lhs.f(x) + rhs.f(x); };
    nl.f1 = [lhs, rhs](double x) { return lhs.f1(x) + rhs.f1(x); };
    nl.f2 = [lhs, rhs](double x) { return lhs.f2(x) + rhs.f2(x); };
    nl.antiderivative = [lhs, rhs](double xi) {
      return lhs.antiderivative(xi) + rhs.antiderivative(xi);
    };
    nl.domain_max = domain_max;
    return nl;
  }
};

// F(xi): closed form when the family provides one, adaptive Simpson otherwise.
inline double primitive(const Nonlinearity& nl, double xi) {
  if (nl.antiderivative) return nl.antiderivative(xi);
  return detail::adaptive_simpson(nl.f, 0.0, xi, 1e-10);
}

struct NonlinearityCheck {
  bool ok = true;
  std::string reason;
};

// Samples (0, upper] and checks positivity, monotonicity, and finite-difference
// consistency of f' with f and f'' with f'.
inline NonlinearityCheck validate_nonlinearity(const Nonlinearity& nl,
                                               double upper,
                                               int points = 48) {
  NonlinearityCheck out;
  auto fail = [&out](std::string why) {
    out.ok = false;
    out.reason = std::move(why);
    return out;
  };
  if (!(upper > 0.0)) return fail("validation range must be positive");
  double scale = 0.0;
  std::vector<double> xs(points);
  for (int j = 0; j < points; ++j) {
    xs[j] = upper * (j + 1) / points;
    scale = std::max(scale, std::abs(nl.f(xs[j])));
  }
  const double flat = 1e-12 * std::max(1.0, scale);
  double prev = nl.f(xs[0]);
  if (prev < -flat) return fail("f negative at x=" + std::to_string(xs[0]));
  for (int j = 1; j < points; ++j) {
    const double cur = nl.f(xs[j]);
    if (cur < -flat) return fail("f negative at x=" + std::to_string(xs[j]));
    if (cur < prev - flat)
      return fail("f decreasing near x=" + std::to_string(xs[j]));
    prev = cur;
  }
  const double step = 1e-5;
  for (int j = 0; j < points; ++j) {
    const double x = xs[j];
    if (x - step <= 0.0) continue;
    const double fd1 = (nl.f(x + step) - nl.f(x - step)) / (2.0 * step);
    const double d1 = nl.f1(x);
    if (std::abs(fd1 - d1) > 1e-4 * std::max(std::abs(d1), 1e-8 * scale))
      return fail("f' inconsistent with f at x=" + std::to_string(x));
    const double fd2 = (nl.f1(x + step) - nl.f1(x - step)) / (2.0 * step);
    const double d2 = nl.f2(x);
    if (std::abs(fd2 - d2) > 1e-4 * std::max(std::abs(d2), 1e-8 * scale))
      return fail("f'' inconsistent with f' at x=" + std::to_string(x));
  }
  return out;
}

// The coefficient g: nonnegative, nondecreasing on [0,1/2], symmetric about
// 1/2. Carries nodal samples plus the generating family for off-node
// evaluation (the shooting oracle integrates between nodes).
class WeightFunction {
 public:
  enum class Family { constant, step, table };

  static WeightFunction constant(Grid grid, double value) {
    WeightFunction g(grid, Family::constant);
    g.value_ = value;
    g.resample();
    g.validate();
    return g;
  }

  // Vanishes outside the open interval (support_beta, 1 - support_beta), so
  // the nodal support test of the vanishing-weight hypothesis is exact.
  static WeightFunction step(Grid grid, double height, double support_beta) {
    if (!(support_beta > 0.0 && support_beta < 0.5))
      throw std::invalid_argument("WeightFunction::step: beta outside (0,1/2)");
    WeightFunction g(grid, Family::step);
    g.value_ = height;
    g.beta_ = support_beta;
    g.resample();
    g.validate();
    return g;
  }

  // Piecewise-linear profile on [0,1/2] given by knots, mirrored to [1/2,1].
  static WeightFunction table(Grid grid, std::vector<double> ts,
                              std::vector<double> gs) {
    if (ts.size() != gs.size() || ts.size() < 2)
      throw std::invalid_argument("WeightFunction::table: need >= 2 knots");
    if (ts.front() != 0.0 || ts.back() != 0.5)
      throw std::invalid_argument(
          "WeightFunction::table: knots must span [0, 0.5]");
    for (std::size_t k = 1; k < ts.size(); ++k)
      if (!(ts[k] > ts[k - 1]))
        throw std::invalid_argument(
            "WeightFunction::table: knots must be strictly increasing");
    WeightFunction g(grid, Family::table);
    g.knot_t_ = std::move(ts);
    g.knot_g_ = std::move(gs);
    g.resample();
    g.validate();
    return g;
  }

  double eval(double t) const {
    switch (family_) {
      case Family::constant:
        return value_;
      case Family::step:
        return (t > beta_ && t < 1.0 - beta_) ? value_ : 0.0;
      case Family::table: {
        const double x = t <= 0.5 ? t : 1.0 - t;
        auto it = std::upper_bound(knot_t_.begin(), knot_t_.end(), x);
        if (it == knot_t_.begin()) return knot_g_.front();
        if (it == knot_t_.end()) return knot_g_.back();
        const std::size_t k = static_cast<std::size_t>(it - knot_t_.begin());
        const double lam = (x - knot_t_[k - 1]) / (knot_t_[k] - knot_t_[k - 1]);
        return (1.0 - lam) * knot_g_[k - 1] + lam * knot_g_[k];
      }
    }
    return 0.0;
  }

  const Grid& grid() const { return grid_; }
  const std::vector<double>& samples() const { return samples_.values(); }
  const GridFunction& as_grid_function() const { return samples_; }
  double operator[](int i) const { return samples_[i]; }
  Family family() const { return family_; }

 private:
  WeightFunction(Grid grid, Family fam)
      : grid_(grid), family_(fam), samples_(GridFunction::zeros(grid)) {}

  void resample() {
    samples_ = GridFunction::sample(grid_, [this](double t) { return eval(t); });
  }

  void validate() const {
    const int n = grid_.n;
    double scale = 0.0;
    for (double x : samples()) scale = std::max(scale, std::abs(x));
    const double tol = 1e-12 * std::max(1.0, scale);
    for (int i = 0; i <= n; ++i) {
      if (samples_[i] < -tol)
        throw std::invalid_argument("WeightFunction: negative sample at node " +
                                    std::to_string(i));
      if (std::abs(samples_[i] - samples_[n - i]) > tol)
        throw std::invalid_argument("WeightFunction: asymmetric at node " +
                                    std::to_string(i));
    }
    for (int i = 0; 2 * (i + 1) <= n; ++i) {
      if (samples_[i + 1] < samples_[i] - tol)
        throw std::invalid_argument(
            "WeightFunction: decreasing on [0,1/2] at node " +
            std::to_string(i));
    }
  }

  Grid grid_;
  Family family_;
  GridFunction samples_;
  double value_ = 0.0;
  double beta_ = 0.0;
  std::vector<double> knot_t_;
  std::vector<double> knot_g_;
};

// Problem data for -u'' = g(t) f(u(t)) with homogeneous Dirichlet conditions.
struct Problem {
  Grid grid;
  Nonlinearity f;
  WeightFunction g;

  Problem(Grid grid_, Nonlinearity f_, WeightFunction g_)
      : grid(grid_), f(std::move(f_)), g(std::move(g_)) {
    if (g.grid() != grid)
      throw GridMismatch("Problem: weight sampled on a different grid");
    if (!(f.domain_max > 0.0))
      throw std::invalid_argument("Problem: domain_max must be positive");
    NonlinearityCheck chk = validate_nonlinearity(
        f, std::isfinite(f.domain_max) ? f.domain_max : 1e6);
    if (!chk.ok)
      throw std::invalid_argument("Problem: nonlinearity rejected: " +
                                  chk.reason);
  }
};

}  // namespace nehari
