#ifndef CUBIC_LAB_SPECTRUM_HPP
#define CUBIC_LAB_SPECTRUM_HPP

#include <stdexcept>
#include <vector>

#include "cubic_lab/cut_parameter.hpp"

namespace cubic_lab {

struct SpectrumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LevelValue {
  int n = 0;
  CutParameter beta{0.0, 0.0};
  cdouble energy{0.0, 0.0};
  std::size_t basis_size = 0;
  double truncation_estimate = 0.0;  // |E(N) - E(N/2)|
  double residual = 0.0;             // eigenpair residual at basis_size
  double simplicity_gap = 0.0;       // distance to the rest of the spectrum
  bool node_verified = false;        // labeled by node count, not continuation
};

// Converged E_n(beta): basis doubling until the truncation estimate meets
// tol, label verified by node count for moderate |beta| and by modulus-ray
// continuation from a node-verified anchor beyond that.
LevelValue level(const CutParameter& beta, int n, double tol);

struct ParameterPath {
  std::vector<CutParameter> waypoints;
  double max_step = 0.15;  // in (log modulus, argument) arclength
};

// Analytic continuation along the path.  Quadratic extrapolation predicts
// each step; the step halves whenever a competing eigenvalue comes within
// 3x the step-induced motion; node count re-verified at every waypoint.
std::vector<LevelValue> continue_level(const ParameterPath& path, int n, double tol);

struct BoundaryValue {
  double b = 0.0;
  int sign = +1;
  int n = 0;
  cdouble energy{0.0, 0.0};
  double alpha_used = 0.0;
  double stability = 0.0;  // max pairwise deviation across the alpha ladder
};

// Boundary value E_n^{+-}(-b) from the rotated operators over the alpha
// ladder {0.10, 0.15, 0.20, 0.25}; throws when no alpha-plateau forms.
BoundaryValue boundary_limit(double b, int sign, int n, double tol);

// One marching sweep delivering boundary values at every target (sorted
// ascending); much cheaper than repeated boundary_limit calls.
std::vector<BoundaryValue> boundary_sweep(const std::vector<double>& targets,
                                          int sign, int n, double tol);

// L_n = lim |beta|^{-1/5} E_n(beta): the (n+1)-th eigenvalue of the
// infinite-coupling operator -d^2/dx^2 + i x^3.
double limit_eigenvalue(int n, double tol);

// |beta^{-1/5} e^{-i arg(beta)/5} E_n(beta) - L_n| over a modulus ladder.
std::vector<double> scaling_check(const std::vector<CutParameter>& ladder, int n);

} // namespace cubic_lab

#endif
