#pragma once

#include <stdexcept>
#include <string>

namespace nehari {

// Structural misuse: operands living on different grids.
struct GridMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Argument outside the certified domain (kernel arguments outside [0,1],
// nonlinearity evaluated beyond domain_max, phi outside [0,1/2]).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// The fiber derivative does not change sign across the annulus bracket;
// the scaling map is undefined for this element.
struct SignPatternViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// |E''(u)(u,u)| fell below threshold; the scale derivative is undefined at u.
struct DegenerateHessian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A point on the descent path left the cone beyond tolerance.
struct ConeDefect : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Annuli passed to the multi-annulus driver are not ordered and disjoint.
struct OverlappingAnnuli : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Configuration file failed validation; message carries the field path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nehari
