#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "nehari/green.hpp"
#include "nehari/grid.hpp"

namespace nehari {

inline GridFunction sample_sin_pi(const Grid& grid) {
  return GridFunction::sample_dirichlet(
      grid, [](double t) { return std::sin(std::numbers::pi * t); });
}

// Finite sine series with bounded random coefficients: smooth, exactly
// zero-boundary, closed-form norms. The workhorse test direction.
inline GridFunction random_sine_series(const Grid& grid, std::mt19937_64& rng,
                                       int kmax = 8, double amplitude = 1.0) {
  std::uniform_real_distribution<double> coef(-amplitude, amplitude);
  std::vector<double> c(static_cast<std::size_t>(kmax));
  for (double& x : c) x = coef(rng);
  return GridFunction::sample_dirichlet(grid, [&c](double t) {
    double acc = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k)
      acc += c[k] * std::sin((k + 1) * std::numbers::pi * t);
    return acc;
  });
}

// Random source satisfying the Harnack lemma premises: nonnegative,
// nondecreasing on [0,1/2], symmetric about 1/2. Mixes step profiles and
// smooth ramps.
inline GridFunction random_monotone_source(const Grid& grid,
                                           std::mt19937_64& rng) {
  const int n = grid.n;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GridFunction w = GridFunction::zeros(grid);
  const int half = n / 2;
  std::vector<double> left(static_cast<std::size_t>(half) + 1, 0.0);
  if (unit(rng) < 0.5) {
    // Staircase: a few random jumps at random interior positions.
    const int jumps = 1 + static_cast<int>(unit(rng) * 4);
    std::vector<std::pair<int, double>> steps;
    for (int j = 0; j < jumps; ++j)
      steps.emplace_back(1 + static_cast<int>(unit(rng) * (half - 1)),
                         unit(rng));
    const double base = unit(rng) < 0.3 ? 0.0 : 0.2 * unit(rng);
    for (int i = 0; i <= half; ++i) {
      double v = base;
      for (const auto& [pos, height] : steps)
        if (i >= pos) v += height;
      left[static_cast<std::size_t>(i)] = v;
    }
  } else {
    // Smooth ramp a + b t^q.
    const double a = 0.2 * unit(rng);
    const double b = 0.2 + unit(rng);
    const double q = 0.5 + 3.0 * unit(rng);
    for (int i = 0; i <= half; ++i)
      left[static_cast<std::size_t>(i)] = a + b * std::pow(grid.node(i), q);
  }
  for (int i = 0; i <= half; ++i) {
    w[i] = left[static_cast<std::size_t>(i)];
    w[n - i] = left[static_cast<std::size_t>(i)];
  }
  return w;
}

// Random cone element of unit energy norm, produced as J^{-1} of a random
// premise-satisfying source; membership is guaranteed by the Harnack lemma.
inline GridFunction random_cone_element(const Grid& grid,
                                        std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    GridFunction u = apply_inverse_laplacian(random_monotone_source(grid, rng));
    const double norm = h01_norm(u);
    if (norm > 1e-12) return (1.0 / norm) * u;
  }
  GridFunction u = sample_sin_pi(grid);
  return (1.0 / h01_norm(u)) * u;
}

}  // namespace nehari
