#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "cubic_lab/shooting.hpp"

using namespace cubic_lab;
using cdouble = std::complex<double>;

TEST_CASE("harmonic oscillator levels") {
  for (int n : {0, 1, 3}) {
    auto r = shoot_eigenvalue({1.0, 0.0}, {0.0, 0.0}, {2.0 * n + 1 + 0.07, 0.0});
    CHECK(r.converged);
    CHECK(std::abs(r.energy - cdouble(2.0 * n + 1, 0.0)) < 1e-8);
  }
}

TEST_CASE("pure imaginary cubic: real spectrum, known ground level") {
  // -psi'' + i x^3 psi = E psi has the known levels 1.15627, 4.109, 7.562
  auto r0 = shoot_eigenvalue({0.0, 0.0}, {0.0, 1.0}, {1.1, 0.0}, 10.0);
  CHECK(r0.converged);
  CHECK(std::abs(r0.energy.real() - 1.15626707198) < 1e-7);
  CHECK(std::abs(r0.energy.imag()) < 1e-8);

  auto r1 = shoot_eigenvalue({0.0, 0.0}, {0.0, 1.0}, {4.1, 0.0}, 10.0);
  CHECK(r1.converged);
  CHECK(std::abs(r1.energy.real() - 4.109228752806) < 1e-6);
  CHECK(std::abs(r1.energy.imag()) < 1e-8);
}

TEST_CASE("cubic term as a perturbation matches second-order theory") {
  // V = x^2 + i sqrt(b) x^3 at small b: E_0 = 1 + (11/16) b + O(b^2)
  const double b = 1e-3;
  auto r = shoot_eigenvalue({1.0, 0.0}, {0.0, std::sqrt(b)}, {1.0007, 0.0});
  CHECK(r.converged);
  CHECK(std::abs(r.energy.imag()) < 1e-9);
  CHECK(std::abs(r.energy.real() - (1.0 + 11.0 / 16.0 * b)) < 5e-6);
}

TEST_CASE("step refinement is consistent") {
  auto coarse = shoot_eigenvalue({0.0, 0.0}, {0.0, 1.0}, {1.1, 0.0}, 10.0, 4e-3);
  auto fine = shoot_eigenvalue({0.0, 0.0}, {0.0, 1.0}, {1.1, 0.0}, 10.0, 1e-3);
  CHECK(std::abs(coarse.energy - fine.energy) < 1e-7);
}

TEST_CASE("invalid parameters throw") {
  CHECK_THROWS_AS(shoot_eigenvalue({1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, 0.5),
                  std::invalid_argument);
}
