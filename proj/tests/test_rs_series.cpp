#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cubic_lab/rs_series.hpp"

using namespace cubic_lab;

namespace {

// Second-order sum-over-states oracle in exact rationals:
//   e_{n,1} = sum_{m != n} |<m|x^3|n>|^2 / (E_m - E_n),  from lambda^2 = -beta.
// |<m|x^3|n>|^2 is rational even though the elements themselves carry sqrt(2).
rational second_order_oracle(int n) {
  auto sq_elem = [](int m, int nn) -> rational {
    // <m|x^3|n>^2 with x = (a + a^dag)/sqrt(2)
    long lo = std::min(m, nn), hi = std::max(m, nn);
    if (hi - lo == 3) {
      return rational((lo + 1) * (lo + 2) * (lo + 3), 8);
    }
    if (hi - lo == 1) {
      long c = lo + 1;
      return rational(9 * c * c * c, 8);
    }
    return rational(0);
  };
  rational sum(0);
  for (int m = std::max(0, n - 3); m <= n + 3; ++m) {
    if (m == n) continue;
    rational s = sq_elem(m, n);
    if (s == 0) continue;
    sum += s / rational(2 * (m - n));
  }
  return sum;
}

} // namespace

TEST_CASE("first RS coefficient of the ground level is 11/16") {
  auto s = rs_coefficients(0, 3);
  CHECK(s.e(1) == rational(11, 16));
}

TEST_CASE("first coefficient matches the sum-over-states oracle for n <= 5") {
  for (int n = 0; n <= 5; ++n) {
    auto s = rs_coefficients(n, 1);
    CHECK(s.e(1) == second_order_oracle(n));
  }
}

TEST_CASE("signs alternate, starting positive") {
  auto s = rs_coefficients(0, 12);
  for (int k = 1; k <= 12; ++k) {
    if (k % 2 == 1)
      CHECK(s.e(k) > 0);
    else
      CHECK(s.e(k) < 0);
  }
  auto s3 = rs_coefficients(3, 8);
  for (int k = 1; k <= 8; ++k) CHECK((k % 2 == 1 ? s3.e(k) > 0 : s3.e(k) < 0));
}

TEST_CASE("moment positivity hook: a_{n,j} = |e_{n,j+1}| > 0") {
  auto s = rs_coefficients(1, 10);
  for (int k = 1; k <= 10; ++k) CHECK(s.e(k) != 0);
}

TEST_CASE("growth ratio trends toward 15/8") {
  auto s = rs_coefficients(0, 30);
  auto fit = growth_fit(s);
  const int m = static_cast<int>(fit.ratio_trend.size());
  // last ten ratios inside a 15% band around 1.875, approaching it
  for (int i = m - 10; i < m; ++i) {
    CHECK(fit.ratio_trend[i] > 1.875 * 0.85);
    CHECK(fit.ratio_trend[i] < 1.875 * 1.15);
  }
  CHECK(std::abs(fit.ratio_trend[m - 1] - 1.875) <
        std::abs(fit.ratio_trend[m - 10] - 1.875));
}

TEST_CASE("fitted bound dominates every computed order") {
  auto s = rs_coefficients(1, 15);
  auto fit = growth_fit(s);
  CHECK(fit.bound_holds);
  CHECK(fit.C > 0.0);
  CHECK(fit.D > 0.0);
}

TEST_CASE("growth fit needs enough orders") {
  auto s = rs_coefficients(0, 5);
  CHECK_THROWS(growth_fit(s));
}

TEST_CASE("Carleman partial sums keep growing") {
  auto s = rs_coefficients(0, 30);
  auto sums = carleman_partial_sums(s);
  REQUIRE(sums.size() >= 20);
  // no visible saturation: increments stay bounded away from zero
  double inc_early = sums[4] - sums[3];
  double inc_late = sums[sums.size() - 1] - sums[sums.size() - 2];
  CHECK(inc_late > 0.2 * inc_early);
}

TEST_CASE("ratio diagnostic q-sensitivity stays mild") {
  auto s = rs_coefficients(0, 25);
  auto f1 = growth_fit(s, 0.5);
  auto f2 = growth_fit(s, 1.0);
  double r1 = f1.ratio_trend.back(), r2 = f2.ratio_trend.back();
  CHECK(std::abs(r1 - r2) / r1 < 0.05);
}

TEST_CASE("exact rational export round trip") {
  auto s = rs_coefficients(0, 1);
  CHECK(rational_to_string(s.e(1)) == "11/16");
}
