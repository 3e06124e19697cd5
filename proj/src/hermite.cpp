#include "cubic_lab/hermite.hpp"

#include <cmath>
#include <stdexcept>

namespace cubic_lab {

double BasisFunctionSet::evaluation_radius() const {
  return 1.5 * std::sqrt(2.0 * static_cast<double>(size)) / std::sqrt(omega);
}

BandedComplexMatrix assemble_operator(cdouble cP, cdouble c2, cdouble c3,
                                      std::size_t N, double omega) {
  if (N < 4) throw std::invalid_argument("assemble_operator: N >= 4 required");
  if (!(omega > 0.0)) throw std::invalid_argument("assemble_operator: omega > 0 required");
  BandedComplexMatrix m(N, 3);
  const double w = omega;
  const double w32 = std::pow(omega, 1.5);
  const double inv2s2 = 1.0 / (2.0 * std::sqrt(2.0));
  for (std::size_t n = 0; n < N; ++n) {
    double d = static_cast<double>(2 * n + 1) * 0.5;
    m.diag(0, n) = cP * (w * d) + c2 * (d / w);
  }
  for (std::size_t n = 0; n + 2 < N; ++n) {
    double t = 0.5 * std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    m.diag(2, n) = -cP * (w * t) + c2 * (t / w);
  }
  for (std::size_t n = 0; n + 1 < N; ++n) {
    double np1 = static_cast<double>(n + 1);
    m.diag(1, n) = c3 * (3.0 * np1 * std::sqrt(np1) * inv2s2 / w32);
  }
  for (std::size_t n = 0; n + 3 < N; ++n) {
    double t = std::sqrt(static_cast<double>((n + 1) * (n + 2) * (n + 3)));
    m.diag(3, n) = c3 * (t * inv2s2 / w32);
  }
  return m;
}

BandedComplexMatrix assemble_cubic(const CutParameter& beta, std::size_t N, double omega) {
  return assemble_operator(1.0, 1.0, cdouble(0.0, 1.0) * beta.sqrt_value(), N, omega);
}

BandedComplexMatrix assemble_rotated(double b, double alpha, int sign,
                                     std::size_t N, double omega) {
  if (!(alpha > 0.0) || !(alpha < CutParameter::pi() / 5.0))
    throw std::domain_error("assemble_rotated: alpha must lie in (0, pi/5)");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("assemble_rotated: sign must be +1 or -1");
  const double s = static_cast<double>(sign);
  const cdouble cP = std::polar(1.0, 2.0 * s * alpha);
  const cdouble c2 = std::polar(1.0, -2.0 * s * alpha);
  const cdouble c3 = -s * std::sqrt(b) * std::polar(1.0, -3.0 * s * alpha);
  return assemble_operator(cP, c2, c3, N, omega);
}

BandedComplexMatrix assemble_limit(std::size_t N, double omega) {
  return assemble_operator(1.0, 0.0, cdouble(0.0, 1.0), N, omega);
}

cdouble EigenfunctionValue::full_value() const {
  if (log_scale.real() > 700.0)
    throw std::range_error("eigenfunction value overflows double range");
  return value * std::exp(log_scale);
}

cdouble EigenfunctionValue::full_derivative() const {
  if (log_scale.real() > 700.0)
    throw std::range_error("eigenfunction derivative overflows double range");
  return derivative * std::exp(log_scale);
}

EigenfunctionValue eigenfunction_value(const std::vector<cdouble>& coeffs,
                                       double omega, cdouble x) {
  const std::size_t N = coeffs.size();
  if (N == 0) throw std::invalid_argument("eigenfunction_value: empty coefficient vector");
  if (!(omega > 0.0)) throw std::invalid_argument("eigenfunction_value: omega > 0 required");
  const double sqw = std::sqrt(omega);
  const cdouble z = sqw * x;

  // h_k(z) = m_k * exp(L); recurrence on mantissas with the gaussian factor
  // and any rescaling absorbed into L.
  cdouble L = -0.5 * z * z;
  const double pref = std::pow(CutParameter::pi(), -0.25) * std::pow(omega, 0.25);
  cdouble hkm1 = 0.0;           // h_{-1}
  cdouble hk = pref;            // h_0 mantissa
  cdouble s0 = 0.0;             // sum c_k h_k
  cdouble s1 = 0.0;             // sum c_k h_k' (in z)
  double tail = 0.0;
  const std::size_t tail_start = N - std::max<std::size_t>(1, N / 10);

  // h'_k needs h_{k+1}; run one index past the coefficient range.
  for (std::size_t k = 0; k <= N; ++k) {
    if (k < N) {
      s0 += coeffs[k] * hk;
      if (k >= tail_start) tail += std::abs(coeffs[k]) * std::abs(hk);
    }
    // derivative contribution of h_k needs h_{k-1} and h_{k+1}; accumulate
    // the h_{k-1} part now and the h_{k+1} part when it appears.
    if (k < N && k > 0)
      s1 += coeffs[k] * std::sqrt(static_cast<double>(k) / 2.0) * hkm1;
    if (k >= 1 && k - 1 < N)
      s1 -= coeffs[k - 1] * std::sqrt(static_cast<double>(k) / 2.0) * hk;
    // advance: h_{k+1} = sqrt(2/(k+1)) z h_k - sqrt(k/(k+1)) h_{k-1}
    double kk = static_cast<double>(k);
    cdouble hnext = std::sqrt(2.0 / (kk + 1.0)) * z * hk -
                    std::sqrt(kk / (kk + 1.0)) * hkm1;
    hkm1 = hk;
    hk = hnext;
    double mag = std::max(std::abs(hk), std::abs(hkm1));
    if (mag > 1e120) {
      double r = std::log(mag);
      double f = std::exp(-r);
      hk *= f;
      hkm1 *= f;
      s0 *= f;
      s1 *= f;
      tail *= f;
      L += r;
    }
  }

  EigenfunctionValue out;
  out.value = s0;
  out.derivative = sqw * s1;  // chain rule for x -> z
  out.log_scale = L;
  out.tail_estimate = tail;
  return out;
}

} // namespace cubic_lab
