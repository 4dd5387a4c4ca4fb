#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "nehari/cone.hpp"
#include "nehari/sampling.hpp"

using namespace nehari;
using std::numbers::pi;

TEST_CASE("phi values and domain") {
  CHECK(phi(0.2) == Catch::Approx(0.12).margin(1e-15));
  CHECK(phi(0.25) == Catch::Approx(0.125).margin(1e-15));
  CHECK(phi(0.0) == 0.0);
  CHECK(phi(0.5) == Catch::Approx(0.0).margin(1e-15));
  CHECK_THROWS_AS(phi(-0.01), DomainError);
  CHECK_THROWS_AS(phi(0.51), DomainError);
}

TEST_CASE("sine profile belongs to the cone") {
  Grid g(400);
  GridFunction u = sample_sin_pi(g);
  ConeReport rep = cone_membership(u, 1e-9);
  CHECK(rep.passes);
  // Pointwise lower bound sin(pi t) >= t(1-2t) * pi/sqrt(2) on [0,1/2].
  for (int i = 0; 2 * i <= g.n; ++i) {
    const double t = g.node(i);
    CHECK(std::sin(pi * t) >= phi(t) * pi / std::sqrt(2.0) - 1e-12);
  }
}

TEST_CASE("parabola belongs to the cone") {
  Grid g(400);
  GridFunction u = GridFunction::sample_dirichlet(
      g, [](double t) { return t * (1 - t); });
  CHECK(h01_norm(u) == Catch::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-5));
  CHECK(cone_membership(u, 1e-9).passes);
}

TEST_CASE("antisymmetric profile fails membership") {
  Grid g(400);
  GridFunction u = GridFunction::sample_dirichlet(
      g, [](double t) { return std::sin(2 * pi * t); });
  ConeReport rep = cone_membership(u, 1e-9);
  CHECK_FALSE(rep.passes);
  CHECK(rep.symmetry_defect == Catch::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("harnack check on reference sources") {
  Grid g(400);

  GridFunction one = GridFunction::sample(g, [](double) { return 1.0; });
  HarnackCheck c1 = harnack_lemma_check(one);
  CHECK(c1.premises_hold);
  CHECK(c1.conclusion_holds);
  CHECK(c1.norm == Catch::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-5));

  HarnackCheck c2 = harnack_lemma_check(sample_sin_pi(g));
  CHECK(c2.premises_hold);
  CHECK(c2.conclusion_holds);

  GridFunction step = GridFunction::sample(g, [](double t) {
    return (t >= 0.2 && t <= 0.8) ? 1.0 : 0.0;
  });
  HarnackCheck c3 = harnack_lemma_check(step);
  CHECK(c3.premises_hold);
  CHECK(c3.conclusion_holds);
}

TEST_CASE("harnack check flags broken premises") {
  Grid g(400);
  GridFunction decreasing =
      GridFunction::sample(g, [](double t) { return t <= 0.5 ? 1.0 - t : 0.5 + (t - 0.5); });
  CHECK_FALSE(harnack_lemma_check(decreasing).premises_hold);
  GridFunction negative = GridFunction::sample(g, [](double) { return -1.0; });
  CHECK_FALSE(harnack_lemma_check(negative).premises_hold);
}

TEST_CASE("harnack conclusion holds for fuzzed premise sources") {
  Grid g(400);
  std::mt19937_64 rng(21);
  for (int k = 0; k < 200; ++k) {
    GridFunction w = random_monotone_source(g, rng);
    HarnackCheck chk = harnack_lemma_check(w);
    REQUIRE(chk.premises_hold);
    INFO("sample " << k << " defect " << chk.harnack_defect);
    CHECK(chk.conclusion_holds);
  }
}

TEST_CASE("cone is closed under scaling and addition") {
  Grid g(400);
  std::mt19937_64 rng(22);
  for (int k = 0; k < 20; ++k) {
    GridFunction u = random_cone_element(g, rng);
    GridFunction v = random_cone_element(g, rng);
    CHECK(cone_membership(3.7 * u, 1e-8).passes);
    CHECK(cone_membership(u + v, 1e-8).passes);
  }
}

TEST_CASE("unit cone elements dominate phi(beta) on [beta, 1/2]") {
  Grid g(400);
  std::mt19937_64 rng(23);
  const double beta = 0.2;
  for (int k = 0; k < 20; ++k) {
    GridFunction v = random_cone_element(g, rng);  // unit energy norm
    for (int i = 0; 2 * i <= g.n; ++i) {
      const double t = g.node(i);
      if (t < beta) continue;
      CHECK(v[i] >= phi(beta) - 1e-10);
    }
  }
}
