#ifndef CUBIC_LAB_CUT_PARAMETER_HPP
#define CUBIC_LAB_CUT_PARAMETER_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace cubic_lab {

using cdouble = std::complex<double>;

// Coupling beta in polar form. The argument lives in [-pi, pi] and the two
// boundary values +pi and -pi are distinct points: they select the upper or
// lower side of the cut, which a rectangular representation cannot express.
class CutParameter {
public:
  CutParameter(double modulus, double argument)
      : modulus_(modulus), argument_(argument) {
    if (modulus < 0.0)
      throw std::invalid_argument("CutParameter: modulus must be >= 0");
    if (std::abs(argument) > pi() + 1e-15)
      throw std::invalid_argument("CutParameter: argument outside [-pi, pi]");
  }

  static double pi() { return 3.14159265358979323846264338327950288; }

  double modulus() const { return modulus_; }
  double argument() const { return argument_; }
  bool is_zero() const { return modulus_ == 0.0; }
  bool on_cut() const { return std::abs(argument_) == pi(); }

  // Lossy export; never feed this back into branch-sensitive code.
  cdouble value() const {
    return std::polar(modulus_, argument_);
  }

  // sqrt(beta) with the branch fixed by the stored argument.  This is the
  // one place the square root is taken.
  cdouble sqrt_value() const {
    return std::polar(std::sqrt(modulus_), argument_ / 2.0);
  }

  // beta^p on the same branch (p real), e.g. p = 1/5 or p = -2/5.
  cdouble power(double p) const {
    return std::polar(std::pow(modulus_, p), argument_ * p);
  }

  CutParameter conj() const { return CutParameter(modulus_, -argument_); }

  CutParameter with_modulus(double m) const { return CutParameter(m, argument_); }
  CutParameter with_argument(double a) const { return CutParameter(modulus_, a); }

  std::string str() const {
    return std::to_string(modulus_) + "@" + std::to_string(argument_);
  }

private:
  double modulus_;
  double argument_;
};

} // namespace cubic_lab

#endif
