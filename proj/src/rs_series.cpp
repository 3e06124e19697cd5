#include "cubic_lab/rs_series.hpp"

#include <cmath>
#include <stdexcept>

namespace cubic_lab {

namespace {

using boost::multiprecision::mpz_int;

// log of |p/q| through the integer sizes, immune to double overflow
double log_abs_rational(const rational& r) {
  if (r == 0) return -std::numeric_limits<double>::infinity();
  mpz_int num = boost::multiprecision::abs(numerator(r));
  mpz_int den = denominator(r);
  long ne = 0, de = 0;
  double nm = mpz_get_d_2exp(&ne, num.backend().data());
  double dm = mpz_get_d_2exp(&de, den.backend().data());
  return std::log(nm) - std::log(dm) + std::log(2.0) * static_cast<double>(ne - de);
}

// w <- x^3 a in the sqrt(n!)-scaled ladder basis where
//   x e_m = (e_{m+1} + m e_{m-1}) / sqrt(2);
// the 2^{-3/2} factor per application is tracked by the caller.
void apply_x_scaled(const std::vector<rational>& a, std::vector<rational>& w) {
  const std::size_t len = a.size();
  w.assign(len, rational(0));
  for (std::size_t m = 0; m < len; ++m) {
    if (a[m] == 0) continue;
    if (m + 1 < len) w[m + 1] += a[m];
    if (m >= 1) w[m - 1] += rational(static_cast<long>(m)) * a[m];
  }
}

} // namespace

double RationalSeries::e_double(int k) const {
  double la = log_abs_e(k);
  double mag = std::exp(la);
  return (e(k) < 0) ? -mag : mag;
}

double RationalSeries::log_abs_e(int k) const { return log_abs_rational(e(k)); }

RationalSeries rs_coefficients(int n, int K) {
  if (n < 0 || K < 1) throw std::invalid_argument("rs_coefficients: need n >= 0, K >= 1");
  const int orders = 2 * K;            // orders in lambda = i sqrt(beta)
  const std::size_t len = static_cast<std::size_t>(n) + 3 * orders + 1;

  // psi_k = 2^{-3k/2} sum_m a[k][m] e_m,  E_k = 2^{-3k/2} Ehat_k
  std::vector<std::vector<rational>> a(orders + 1, std::vector<rational>(len, rational(0)));
  std::vector<rational> ehat(orders + 1, rational(0));
  a[0][static_cast<std::size_t>(n)] = 1;

  std::vector<rational> w, t;
  for (int k = 1; k <= orders; ++k) {
    // w = x^3 psi_{k-1} (scaled part)
    apply_x_scaled(a[k - 1], t);
    apply_x_scaled(t, w);
    apply_x_scaled(w, t);
    w.swap(t);
    ehat[k] = w[static_cast<std::size_t>(n)];
    for (std::size_t m = 0; m < len; ++m) {
      if (m == static_cast<std::size_t>(n)) continue;  // intermediate normalization
      rational rhs = -w[m];
      for (int j = 2; j < k; j += 2) rhs += ehat[j] * a[k - j][m];
      if (rhs == 0) continue;
      long gap = 2 * (static_cast<long>(m) - n);
      a[k][m] = rhs / rational(gap);
    }
  }

  RationalSeries out;
  out.n = n;
  out.coefficients.reserve(K);
  rational scale(1);  // 2^{3m}
  for (int m = 1; m <= K; ++m) {
    scale *= 8;
    // lambda^{2m} = (-beta)^m, and the 2^{-3m} from the scaled x^3 powers
    rational coeff = ehat[2 * m] / scale;
    if (m % 2 == 1) coeff = -coeff;
    out.coefficients.push_back(coeff);
    if (ehat[2 * m - 1] != 0)
      throw std::logic_error("rs_coefficients: odd order failed to vanish");
  }
  return out;
}

GrowthFit growth_fit(const RationalSeries& series, double q) {
  const int K = series.order();
  if (K < 10) throw std::invalid_argument("growth_fit: need at least 10 orders");
  GrowthFit fit;
  fit.q = q;
  fit.orders_used = K;

  // least squares on log|e_k| - log k! = log D + k log C
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> y(K + 1);
  double logfact = 0.0;
  for (int k = 1; k <= K; ++k) {
    logfact += std::log(static_cast<double>(k));
    y[k] = series.log_abs_e(k) - logfact;
    sx += k;
    sy += y[k];
    sxx += static_cast<double>(k) * k;
    sxy += k * y[k];
  }
  double denom = K * sxx - sx * sx;
  double slope = (K * sxy - sx * sy) / denom;
  double inter = (sy - slope * sx) / K;
  fit.C = std::exp(slope);
  fit.D = std::exp(inter);
  double rss = 0.0;
  for (int k = 1; k <= K; ++k) {
    double r = y[k] - (inter + slope * k);
    rss += r * r;
  }
  fit.fit_residual = std::sqrt(rss / K);

  // enlarge D until the bound dominates every computed order
  for (int k = 1; k <= K; ++k) {
    double lhs = series.log_abs_e(k);
    double logfk = std::lgamma(static_cast<double>(k) + 1.0);
    double rhs = std::log(fit.D) + k * std::log(fit.C) + logfk;
    if (lhs > rhs) fit.D *= std::exp(lhs - rhs) * (1.0 + 1e-12);
  }
  fit.bound_holds = true;
  for (int k = 1; k <= K; ++k) {
    double rhs = std::log(fit.D) + k * std::log(fit.C) +
                 std::lgamma(static_cast<double>(k) + 1.0);
    if (series.log_abs_e(k) > rhs + 1e-9) fit.bound_holds = false;
  }

  fit.ratio_trend.reserve(K - 1);
  for (int k = 1; k < K; ++k) {
    double lr = series.log_abs_e(k + 1) - series.log_abs_e(k) -
                std::log(static_cast<double>(k) + q);
    fit.ratio_trend.push_back(std::exp(lr));
  }
  return fit;
}

std::vector<double> carleman_partial_sums(const RationalSeries& series) {
  std::vector<double> sums;
  double acc = 0.0;
  // a_{n,k} = |e_{n,k+1}|, k >= 1 in the criterion
  for (int k = 1; k + 1 <= series.order(); ++k) {
    double la = series.log_abs_e(k + 1);
    acc += std::exp(-la / (2.0 * k));
    sums.push_back(acc);
  }
  return sums;
}

std::string rational_to_string(const rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

} // namespace cubic_lab
