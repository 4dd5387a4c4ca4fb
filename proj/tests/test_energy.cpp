#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "nehari/energy.hpp"
#include "nehari/nehari_set.hpp"
#include "nehari/sampling.hpp"
#include "nehari/verify.hpp"

using namespace nehari;
using std::numbers::pi;

namespace {
Problem power_problem(Grid g, double a, double p) {
  return Problem(g, Nonlinearity::power(a, p, 1e6),
                 WeightFunction::constant(g, 1.0));
}

Nonlinearity zero_f() {
  Nonlinearity nl;
  nl.f = [](double) { return 0.0; };
  nl.f1 = [](double) { return 0.0; };
  nl.f2 = [](double) { return 0.0; };
  nl.antiderivative = [](double) { return 0.0; };
  nl.domain_max = 1e6;
  return nl;
}
}  // namespace

TEST_CASE("energy reference values") {
  Grid g(400);
  Problem lin = power_problem(g, 1.0, 1.0);
  CHECK(energy(lin, GridFunction::zeros(g)) == 0.0);

  GridFunction s1 = sample_sin_pi(g);
  CHECK(energy(lin, s1) ==
        Catch::Approx(pi * pi / 4 - 0.25).epsilon(1e-4));

  // Brute-force quadrature oracle for the quartic moment.
  GridFunction s4 = GridFunction::sample_dirichlet(
      g, [](double t) { return std::pow(std::sin(pi * t), 4.0); });
  const double m4 = quadrature(s4);
  CHECK(m4 == Catch::Approx(3.0 / 8.0).margin(1e-6));
  Problem cubic = power_problem(g, 1.0, 3.0);
  CHECK(energy(cubic, s1) ==
        Catch::Approx(pi * pi / 4 - 0.25 * m4).epsilon(1e-4));
}

TEST_CASE("simpson fallback matches the closed-form antiderivative") {
  Grid g(200);
  Nonlinearity cubic = Nonlinearity::power(1.0, 3.0, 1e6);
  Nonlinearity no_closed_form = cubic;
  no_closed_form.antiderivative = nullptr;
  Problem pa(g, cubic, WeightFunction::constant(g, 1.0));
  Problem pb(g, no_closed_form, WeightFunction::constant(g, 1.0));
  GridFunction s1 = sample_sin_pi(g);
  CHECK(energy(pb, s1) == Catch::Approx(energy(pa, s1)).margin(1e-9));
}

TEST_CASE("gradient basics") {
  Grid g(400);
  Problem none(g, zero_f(), WeightFunction::constant(g, 1.0));
  std::mt19937_64 rng(31);
  GridFunction u = random_sine_series(g, rng);
  CHECK(compare(gradient(none, u), u) == 0.0);

  Problem cubic = power_problem(g, 1.0, 3.0);
  CHECK(sup_norm(gradient(cubic, GridFunction::zeros(g))) == 0.0);
}

TEST_CASE("gradient matches central differences of the energy") {
  Grid g(400);
  Problem p = power_problem(g, 3.0, 3.0);
  std::mt19937_64 rng(32);
  const double eps = 1e-5;
  for (int k = 0; k < 20; ++k) {
    GridFunction u = (1.0 + 3.0 * (k / 20.0)) * random_cone_element(g, rng);
    GridFunction v = random_sine_series(g, rng);
    const double lhs = h01_inner(gradient(p, u), v);
    const double fd = (energy(p, add_scaled(u, eps, v)) -
                       energy(p, add_scaled(u, -eps, v))) /
                      (2 * eps);
    CHECK(lhs == Catch::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("hessian form reference values and symmetry") {
  Grid g(400);
  std::mt19937_64 rng(33);
  GridFunction u = random_sine_series(g, rng);
  GridFunction w = sample_sin_pi(g);

  Problem none(g, zero_f(), WeightFunction::constant(g, 1.0));
  CHECK(hessian_form(none, u, w, w) ==
        Catch::Approx(h01_inner(w, w)).margin(1e-13));

  Problem lin = power_problem(g, 1.0, 1.0);
  CHECK(hessian_form(lin, u, w, w) ==
        Catch::Approx(pi * pi / 2 - 0.5).epsilon(1e-4));

  Problem cubic = power_problem(g, 3.0, 3.0);
  GridFunction w1 = random_sine_series(g, rng);
  GridFunction w2 = random_sine_series(g, rng);
  CHECK(hessian_form(cubic, u, w1, w2) ==
        Catch::Approx(hessian_form(cubic, u, w2, w1)).margin(1e-13));
}

TEST_CASE("hessian form matches second differences of the energy") {
  Grid g(400);
  Problem p = power_problem(g, 3.0, 3.0);
  std::mt19937_64 rng(34);
  const double eps = 1e-4;
  for (int k = 0; k < 20; ++k) {
    GridFunction u = (1.0 + 2.0 * (k / 20.0)) * random_cone_element(g, rng);
    GridFunction v = random_sine_series(g, rng);
    const double lhs = hessian_form(p, u, v, v);
    const double fd = (energy(p, add_scaled(u, eps, v)) - 2 * energy(p, u) +
                       energy(p, add_scaled(u, -eps, v))) /
                      (eps * eps);
    CHECK(lhs == Catch::Approx(fd).epsilon(1e-3));
  }
}

TEST_CASE("power-law identities on the manifold") {
  Grid g(400);
  const double a = 1.0, pexp = 3.0;
  Problem p = power_problem(g, a, pexp);
  const AnnulusSpec ann(1.0, 60.0, 0.2);
  std::mt19937_64 rng(35);
  for (int k = 0; k < 10; ++k) {
    GridFunction u = project(p, random_cone_element(g, rng), ann);
    const double norm2 = h01_inner(u, u);
    CHECK(energy(p, u) ==
          Catch::Approx((0.5 - 1.0 / (pexp + 1.0)) * norm2).epsilon(1e-6));
    CHECK(hessian_form(p, u, u, u) ==
          Catch::Approx((1.0 - pexp) * norm2).epsilon(1e-6));
  }
}

TEST_CASE("two-term power family closed forms") {
  Grid g(200);
  Nonlinearity mix = Nonlinearity::power_sum(2.0, 3.0, 0.5, 2.0, 1e6);
  CHECK(mix.f(2.0) == Catch::Approx(2.0 * 8.0 + 0.5 * 4.0).margin(1e-12));
  CHECK(mix.f1(2.0) == Catch::Approx(6.0 * 4.0 + 1.0 * 2.0).margin(1e-12));
  CHECK(mix.f2(2.0) == Catch::Approx(12.0 * 2.0 + 1.0).margin(1e-12));
  CHECK(primitive(mix, 2.0) ==
        Catch::Approx(0.5 * 16.0 + 0.5 / 3.0 * 8.0).margin(1e-12));

  Nonlinearity no_cf = mix;
  no_cf.antiderivative = nullptr;
  Problem pa(g, mix, WeightFunction::constant(g, 1.0));
  Problem pb(g, no_cf, WeightFunction::constant(g, 1.0));
  GridFunction s1 = sample_sin_pi(g);
  CHECK(energy(pb, s1) == Catch::Approx(energy(pa, s1)).margin(1e-9));
}
