#ifndef CUBIC_LAB_PADE_HPP
#define CUBIC_LAB_PADE_HPP

#include <complex>
#include <vector>

#include "cubic_lab/rs_series.hpp"

namespace cubic_lab {

// Diagonal [j/j] approximant of F_n(beta) = sum_{k>=0} e_{n,k+1} beta^k, so
// that E_n(beta) is approximated by (2n+1) + beta P(beta)/Q(beta).  P and Q
// are exact rational polynomials of degree j with Q(0) = 1.
struct PadeApproximant {
  int n = 0;
  int j = 0;
  std::vector<rational> P;  // P[0..j]
  std::vector<rational> Q;  // Q[0..j], Q[0] = 1
};

// Needs series.order() >= 2j + 1.  Throws if the Hankel system is singular
// (which cannot happen for a nondegenerate Stieltjes series).
PadeApproximant build_pade(const RationalSeries& series, int j);

// (2n+1) + beta P(beta)/Q(beta), Horner in 50-digit complex arithmetic.
std::complex<double> evaluate(const PadeApproximant& pade, std::complex<double> beta);

// Exact re-expansion check: the Taylor series of P/Q reproduces the first
// 2j + 1 coefficients of F_n.
bool matches_series(const PadeApproximant& pade, const RationalSeries& series);

struct DenominatorRoots {
  std::vector<std::complex<double>> roots;
  bool negative_real_axis = false;  // all roots on (-inf, 0)
};

DenominatorRoots denominator_roots(const PadeApproximant& pade);

// Hankel determinants of the moment candidates a_k = |e_{n,k+1}|, k >= 0:
//   H0[m-1] = det [a_{i+l}]_{i,l=0..m-1},  H1[m-1] = det [a_{i+l+1}],
// for m = 1..max_order.  Positivity of both families is the Stieltjes
// criterion for the series.
struct HankelReport {
  int n = 0;
  std::vector<rational> H0;
  std::vector<rational> H1;
  bool stieltjes = false;  // every determinant of both families positive
};

HankelReport hankel_report(const RationalSeries& series, int max_order);

} // namespace cubic_lab

#endif
