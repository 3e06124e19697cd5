#ifndef CUBIC_LAB_SHOOTING_HPP
#define CUBIC_LAB_SHOOTING_HPP

#include <complex>

namespace cubic_lab {

// Independent ODE cross-check for eigenvalues of -psi'' + (c2 x^2 + c3 x^3) psi
// = E psi on the real line: RK4 integration of the decaying solutions inward
// from +/-X, secant iteration on the log-derivative mismatch at the matching
// point.  Shares nothing with the Galerkin path.
struct ShootingResult {
  std::complex<double> energy{0.0, 0.0};
  int iterations = 0;
  double mismatch = 0.0;  // |log-derivative residual| at the solution
  bool converged = false;
};

ShootingResult shoot_eigenvalue(std::complex<double> c2, std::complex<double> c3,
                                std::complex<double> guess, double X = 12.0,
                                double step = 2e-3);

} // namespace cubic_lab

#endif
