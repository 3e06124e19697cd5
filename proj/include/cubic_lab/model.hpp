#ifndef CUBIC_LAB_MODEL_HPP
#define CUBIC_LAB_MODEL_HPP

#include <array>
#include <vector>

#include "cubic_lab/cut_parameter.hpp"

namespace cubic_lab {

// V_beta(x) = x^2 + i sqrt(beta) x^3, with the sqrt branch held by beta.
struct Potential {
  CutParameter beta;
  cdouble value(cdouble x) const {
    return x * x + cdouble(0.0, 1.0) * beta.sqrt_value() * x * x * x;
  }
};

inline cdouble potential_value(const Potential& p, cdouble x) {
  return p.value(x);
}

struct TurningPoints {
  std::array<cdouble, 3> roots;   // sorted by argument
  double max_residual;            // max |V(root) - E|
  bool ill_conditioned;           // clustered roots, residual still reported
};

// All roots of V_beta(x) - E = 0.  Companion-matrix eigenvalues of the monic
// cubic, then one Newton polish per root.
TurningPoints turning_points(const Potential& p, cdouble E);

// Roots of a general cubic c3 x^3 + c2 x^2 + c1 x + c0, c3 != 0.
std::array<cdouble, 3> cubic_roots(cdouble c3, cdouble c2, cdouble c1, cdouble c0);

enum class FrameKind {
  energy_dominant,   // x = |E|^{1/3} e^{-i theta/10} y,  h = |E|^{-5/6}
  coupling_small_a,  // x = sqrt(|E|) y,                  h = |E|^{-1}
  coupling_small_b,  // x = |E|^{1/3} beta^{-1/6} y,      h = beta^{1/6}|E|^{-5/6}
  beta_large         // x = beta^{-1/10} y
};

// A rescaling of the eigenvalue problem to semiclassical form
//   -h^2 phi'' + (c3 y^3 + c2 y^2) phi = lambda phi,  |lambda| = 1.
struct ScalingFrame {
  FrameKind kind;
  double h = 0.0;          // effective semiclassical parameter
  cdouble lambda;          // rescaled energy on the unit circle
  double alpha = 0.0;      // auxiliary coefficient of the small-coupling cases
  cdouble x_map;           // x = x_map * y
  cdouble c3;              // cubic coefficient of the rescaled potential
  cdouble c2;              // quadratic coefficient of the rescaled potential
  // Half-plane constant of the turning-point count {Im y < C h^{2/5}};
  // not pinned by the source analysis, exposed for sensitivity runs.
  double strip_constant = 1.0;
};

ScalingFrame make_frame(FrameKind kind, cdouble E, const CutParameter& beta);

// Frame of the b-large limiting cubic i sqrt(b) y^3 = lambda (all h- and
// quadratic terms dropped); used by the anti-Stokes machinery.
ScalingFrame limit_frame(double b, cdouble lambda);

} // namespace cubic_lab

#endif
