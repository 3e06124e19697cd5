#include "cubic_lab/pade.hpp"

#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <stdexcept>

#include "cubic_lab/eigensolver.hpp"
#include "cubic_lab/matrix.hpp"

namespace cubic_lab {

namespace {

using complex50 = boost::multiprecision::cpp_complex_50;
using float50 = boost::multiprecision::cpp_bin_float_50;

float50 to_float50(const rational& r) {
  return float50(numerator(r).str()) / float50(denominator(r).str());
}

// Solve A x = b in exact rationals, Gaussian elimination with a nonzero pivot.
std::vector<rational> rational_solve(std::vector<std::vector<rational>> A,
                                     std::vector<rational> b) {
  const std::size_t m = b.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && A[piv][col] == 0) ++piv;
    if (piv == m) throw std::runtime_error("pade: singular Hankel system");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t row = col + 1; row < m; ++row) {
      if (A[row][col] == 0) continue;
      rational f = A[row][col] / A[col][col];
      for (std::size_t k = col; k < m; ++k) A[row][k] -= f * A[col][k];
      b[row] -= f * b[col];
    }
  }
  std::vector<rational> x(m, rational(0));
  for (std::size_t row = m; row-- > 0;) {
    rational s = b[row];
    for (std::size_t k = row + 1; k < m; ++k) s -= A[row][k] * x[k];
    x[row] = s / A[row][row];
  }
  return x;
}

rational rational_determinant(std::vector<std::vector<rational>> A) {
  const std::size_t m = A.size();
  rational det(1);
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && A[piv][col] == 0) ++piv;
    if (piv == m) return rational(0);
    if (piv != col) {
      std::swap(A[piv], A[col]);
      det = -det;
    }
    det *= A[col][col];
    for (std::size_t row = col + 1; row < m; ++row) {
      if (A[row][col] == 0) continue;
      rational f = A[row][col] / A[col][col];
      for (std::size_t k = col; k < m; ++k) A[row][k] -= f * A[col][k];
    }
  }
  return det;
}

} // namespace

PadeApproximant build_pade(const RationalSeries& series, int j) {
  if (j < 1) throw std::invalid_argument("build_pade: need j >= 1");
  if (series.order() < 2 * j + 1)
    throw std::invalid_argument("build_pade: need 2j + 1 series coefficients");
  auto c = [&](int k) -> const rational& { return series.e(k + 1); };

  // denominator: sum_{i=1..j} q_i c_{m-i} = -c_m for m = j+1 .. 2j
  std::vector<std::vector<rational>> A(j, std::vector<rational>(j));
  std::vector<rational> b(j);
  for (int row = 0; row < j; ++row) {
    int m = j + 1 + row;
    for (int i = 1; i <= j; ++i) A[row][i - 1] = c(m - i);
    b[row] = -c(m);
  }
  auto q = rational_solve(std::move(A), std::move(b));

  PadeApproximant pade;
  pade.n = series.n;
  pade.j = j;
  pade.Q.assign(j + 1, rational(0));
  pade.Q[0] = 1;
  for (int i = 1; i <= j; ++i) pade.Q[i] = q[i - 1];
  pade.P.assign(j + 1, rational(0));
  for (int m = 0; m <= j; ++m) {
    rational s = c(m);
    for (int i = 1; i <= std::min(m, j); ++i) s += pade.Q[i] * c(m - i);
    pade.P[m] = s;
  }
  return pade;
}

std::complex<double> evaluate(const PadeApproximant& pade, std::complex<double> beta) {
  const complex50 z(float50(beta.real()), float50(beta.imag()));
  complex50 p(0), q(0);
  for (int k = pade.j; k >= 0; --k) {
    p = p * z + complex50(to_float50(pade.P[k]));
    q = q * z + complex50(to_float50(pade.Q[k]));
  }
  complex50 value = float50(2 * pade.n + 1) + z * p / q;
  return {static_cast<double>(value.real()), static_cast<double>(value.imag())};
}

bool matches_series(const PadeApproximant& pade, const RationalSeries& series) {
  const int j = pade.j;
  if (series.order() < 2 * j + 1) return false;
  // Taylor coefficients d_m of P/Q: d_m = p_m - sum_{i=1..min(m,j)} q_i d_{m-i}
  std::vector<rational> d(2 * j + 1, rational(0));
  for (int m = 0; m <= 2 * j; ++m) {
    rational s = (m <= j) ? pade.P[m] : rational(0);
    for (int i = 1; i <= std::min(m, j); ++i) s -= pade.Q[i] * d[m - i];
    d[m] = s;
    if (d[m] != series.e(m + 1)) return false;
  }
  return true;
}

DenominatorRoots denominator_roots(const PadeApproximant& pade) {
  const int j = pade.j;
  // companion matrix of Q scaled to a monic polynomial, in 50-digit floats
  // flattened to double after normalization by the leading coefficient
  if (pade.Q[j] == 0) throw std::runtime_error("denominator_roots: degenerate Q");
  std::vector<double> monic(j);  // coefficients of z^0 .. z^{j-1}
  float50 lead = to_float50(pade.Q[j]);
  for (int k = 0; k < j; ++k)
    monic[k] = static_cast<double>(to_float50(pade.Q[k]) / lead);

  CMatrix comp(j);
  for (int i = 1; i < j; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < j; ++i) comp(i, j - 1) = -monic[i];

  DenominatorRoots out;
  out.roots = all_eigenvalues(comp, 1e-12);
  // companion eigenvalues of clustered roots lose digits in double; polish
  // with Newton against the exact coefficients in 50-digit arithmetic
  for (auto& r : out.roots) {
    complex50 z(float50(r.real()), float50(r.imag()));
    for (int it = 0; it < 8; ++it) {
      complex50 v(0), dv(0);
      for (int k = j; k >= 0; --k) {
        dv = dv * z + v;
        v = v * z + complex50(to_float50(pade.Q[k]));
      }
      if (dv == complex50(0)) break;
      complex50 step = v / dv;
      z -= step;
      if (abs(step) < 1e-40 * abs(z)) break;
    }
    r = {static_cast<double>(z.real()), static_cast<double>(z.imag())};
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](auto a, auto b) { return a.real() < b.real(); });
  out.negative_real_axis = true;
  for (auto r : out.roots) {
    double scale = std::abs(r);
    if (!(r.real() < 0.0) || std::abs(r.imag()) > 1e-8 * (1.0 + scale))
      out.negative_real_axis = false;
  }
  return out;
}

HankelReport hankel_report(const RationalSeries& series, int max_order) {
  if (series.order() < 2 * max_order)
    throw std::invalid_argument("hankel_report: need 2 * max_order coefficients");
  HankelReport rep;
  rep.n = series.n;
  auto moment = [&](int k) {
    rational a = series.e(k + 1);
    return (a < 0) ? rational(-a) : a;
  };
  rep.stieltjes = true;
  for (int m = 1; m <= max_order; ++m) {
    for (int shift = 0; shift <= 1; ++shift) {
      std::vector<std::vector<rational>> H(m, std::vector<rational>(m));
      for (int i = 0; i < m; ++i)
        for (int l = 0; l < m; ++l) H[i][l] = moment(i + l + shift);
      rational det = rational_determinant(std::move(H));
      (shift == 0 ? rep.H0 : rep.H1).push_back(det);
      if (det <= 0) rep.stieltjes = false;
    }
  }
  return rep;
}

} // namespace cubic_lab
