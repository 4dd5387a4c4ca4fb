#pragma once

#include <algorithm>
#include <cmath>

#include "nehari/green.hpp"
#include "nehari/grid.hpp"

namespace nehari {

// Harnack weight phi(t) = t(1-2t) on [0,1/2].
inline double phi(double t) {
  if (t < 0.0 || t > 0.5) throw DomainError("phi: argument outside [0,1/2]");
  return t * (1.0 - 2.0 * t);
}

// Nodal defects against the cone K: symmetry about 1/2, monotonicity on
// [0,1/2], and the Harnack lower bound u(t) >= phi(t)|u|. A genuine member
// shows defects at rounding level only, so `passes` compares against
// tol_cone scaled by the energy norm.
struct ConeReport {
  double symmetry_defect = 0.0;
  double monotonicity_defect = 0.0;
  double harnack_defect = 0.0;
  double norm = 0.0;
  double tol = 0.0;
  bool passes = false;

  double max_defect() const {
    return std::max({symmetry_defect, monotonicity_defect, harnack_defect});
  }
};

inline ConeReport cone_membership(const GridFunction& u,
                                  double tol_cone = 1e-8) {
  const int n = u.grid().n;
  ConeReport rep;
  rep.norm = h01_norm(u);
  rep.tol = tol_cone;
  for (int i = 0; 2 * i <= n; ++i) {
    rep.symmetry_defect =
        std::max(rep.symmetry_defect, std::abs(u[i] - u[n - i]));
    const double t = u.grid().node(i);
    rep.harnack_defect =
        std::max(rep.harnack_defect, phi(t) * rep.norm - u[i]);
  }
  rep.harnack_defect = std::max(rep.harnack_defect, 0.0);
  for (int i = 0; 2 * (i + 1) <= n; ++i)
    rep.monotonicity_defect = std::max(rep.monotonicity_defect, u[i] - u[i + 1]);
  rep.monotonicity_defect = std::max(rep.monotonicity_defect, 0.0);
  rep.passes = rep.max_defect() <= tol_cone * rep.norm;
  return rep;
}

struct HarnackCheck {
  bool premises_hold = false;
  bool conclusion_holds = false;
  double harnack_defect = 0.0;
  double norm = 0.0;
};

// Drives the Harnack inequality from the source side: w plays the role of
// Ju. Premises: w >= 0, nondecreasing on [0,1/2], symmetric. Conclusion:
// u = J^{-1} w satisfies u(t) >= phi(t)|u| up to 1e-9|u|.
inline HarnackCheck harnack_lemma_check(const GridFunction& w_source) {
  const int n = w_source.grid().n;
  HarnackCheck out;
  double scale = 0.0;
  for (double x : w_source.values()) scale = std::max(scale, std::abs(x));
  const double tol = 1e-12 * std::max(1.0, scale);
  out.premises_hold = true;
  for (int i = 0; i <= n && out.premises_hold; ++i) {
    if (w_source[i] < -tol) out.premises_hold = false;
    if (std::abs(w_source[i] - w_source[n - i]) > tol) out.premises_hold = false;
  }
  for (int i = 0; 2 * (i + 1) <= n && out.premises_hold; ++i)
    if (w_source[i + 1] < w_source[i] - tol) out.premises_hold = false;

  const GridFunction u = apply_inverse_laplacian(w_source);
  out.norm = h01_norm(u);
  double defect = 0.0;
  for (int i = 0; 2 * i <= n; ++i)
    defect = std::max(defect, phi(u.grid().node(i)) * out.norm - u[i]);
  out.harnack_defect = std::max(defect, 0.0);
  out.conclusion_holds = out.harnack_defect <= 1e-9 * out.norm;
  return out;
}

}  // namespace nehari
