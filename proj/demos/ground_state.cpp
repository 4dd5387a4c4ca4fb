// Minimal library walkthrough: certify the hypotheses for a cubic
// nonlinearity on the annulus 1 < |u| < 60, run the descent, and cross-check
// the result against the shooting integrator.

#include <iostream>

#include "nehari/nehari.hpp"

int main() {
  using namespace nehari;

  const Grid grid(400);
  const AnnulusSpec annulus(1.0, 60.0, 0.2);
  Problem problem(grid, Nonlinearity::power(3.0, 3.0, 100.0 * annulus.R),
                  WeightFunction::constant(grid, 1.0));

  HypothesisReport report = certify(problem, annulus);
  std::cout << "H1 margins: " << report.h1.left_margin << ", "
            << report.h1.right_margin << "  (pass: " << report.h1.pass
            << ")\n";
  if (!report.passes) {
    std::cout << "hypothesis checks failed, not solving\n";
    return 1;
  }

  auto [solution, trace] = solve(problem, annulus);
  std::cout << "status: " << to_string(solution.status) << " after "
            << solution.iterations << " iterations\n"
            << "|u| = " << solution.norm << ", E = " << solution.energy
            << ", |E'| = " << solution.grad_norm << "\n"
            << "residual = " << solution.residual
            << ", localized: " << solution.localized << "\n";

  auto roots = shoot(problem, {0.0, 4.0 * annulus.R}, 2000);
  for (const ShootingResult& root : roots)
    std::cout << "shooting root: slope " << root.slope << ", sup difference "
              << compare(solution.u, root.u) << "\n";
  return 0;
}
