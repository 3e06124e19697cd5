#ifndef CUBIC_LAB_RS_SERIES_HPP
#define CUBIC_LAB_RS_SERIES_HPP

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <vector>

namespace cubic_lab {

using rational = boost::multiprecision::mpq_rational;

// Exact Rayleigh-Schroedinger coefficients of level n: E_n(beta) ~ 2n+1 +
// sum_k e_{n,k} beta^k.  The recursion runs in the oscillator basis where
// every order-k correction lives in finitely many basis indices, so the
// coefficients come out as exact rationals (the sqrt(2) factors of the x^3
// matrix elements cancel in pairs since odd orders vanish by parity).
struct RationalSeries {
  int n = 0;
  std::vector<rational> coefficients;  // e_{n,1} .. e_{n,K}
  int order() const { return static_cast<int>(coefficients.size()); }
  const rational& e(int k) const { return coefficients.at(k - 1); }  // 1-based
  double e_double(int k) const;
  // log |e_{n,k}|, safe for coefficients far outside double range
  double log_abs_e(int k) const;
};

RationalSeries rs_coefficients(int n, int K);

// Fit of the factorial growth |e_{n,k}| <= D C^k k!, plus the ratio
// diagnostic |e_{k+1}|/((k+q)|e_k|) whose large-k trend approaches 15/8.
struct GrowthFit {
  double C = 0.0;
  double D = 0.0;
  int orders_used = 0;
  double fit_residual = 0.0;          // rms residual of the log fit
  std::vector<double> ratio_trend;    // |e_{k+1}|/((k+q)|e_k|) for k = 1..K-1
  double q = 0.5;                     // offset used in the ratio diagnostic
  bool bound_holds = true;            // |e_k| <= D C^k k! at every order
};

GrowthFit growth_fit(const RationalSeries& series, double q = 0.5);

// Partial sums of (1/a_{n,k})^{1/2k} with a_{n,k} = |e_{n,k+1}|; divergence
// of this sum is the Carleman uniqueness criterion for the moment problem.
std::vector<double> carleman_partial_sums(const RationalSeries& series);

std::string rational_to_string(const rational& r);

} // namespace cubic_lab

#endif
