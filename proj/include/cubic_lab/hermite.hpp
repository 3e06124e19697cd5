#ifndef CUBIC_LAB_HERMITE_HPP
#define CUBIC_LAB_HERMITE_HPP

#include <vector>

#include "cubic_lab/matrix.hpp"

namespace cubic_lab {

// Oscillator eigenbasis at frequency omega: functions h_k(x; omega) =
// omega^{1/4} h_k(sqrt(omega) x), L^2-orthonormal for any omega > 0.
struct BasisFunctionSet {
  std::size_t size;
  double omega;
  // Complex Hermite truncations track the true eigenfunction only inside
  // this disk; node contours must stay within it.
  double evaluation_radius() const;
};

// Matrix of cP*(-d^2/dx^2) + c2*x^2 + c3*x^3 in the omega-scaled basis.
BandedComplexMatrix assemble_operator(cdouble cP, cdouble c2, cdouble c3,
                                      std::size_t N, double omega);

// H(beta) = -d^2/dx^2 + x^2 + i sqrt(beta) x^3
BandedComplexMatrix assemble_cubic(const CutParameter& beta, std::size_t N, double omega);

// Rotated boundary operator, sign = +1 or -1:
//   e^{+-2ia} P + e^{-+2ia} X^2 -+ sqrt(b) e^{-+3ia} X^3,  0 < a < pi/5
BandedComplexMatrix assemble_rotated(double b, double alpha, int sign,
                                     std::size_t N, double omega);

// Infinite-coupling operator -d^2/dx^2 + i x^3
BandedComplexMatrix assemble_limit(std::size_t N, double omega);

// Value and derivative of sum_k c_k h_k(x; omega) at complex x, as
// mantissa * exp(log_scale): the mantissas stay in range, the common factor
// (including the e^{-w x^2/2} phase) lives in log_scale.
struct EigenfunctionValue {
  cdouble value;       // mantissa of psi(x)
  cdouble derivative;  // mantissa of psi'(x), same scale
  cdouble log_scale;
  double tail_estimate;  // sum of |c_k h_k| mantissas over the last 10% of k
  cdouble full_value() const;       // may overflow; throws std::range_error
  cdouble full_derivative() const;
  cdouble log_derivative() const {  // psi'/psi, scale-free
    return derivative / value;
  }
};

EigenfunctionValue eigenfunction_value(const std::vector<cdouble>& coeffs,
                                       double omega, cdouble x);

} // namespace cubic_lab

#endif
