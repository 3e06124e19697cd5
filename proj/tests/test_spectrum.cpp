#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "cubic_lab/shooting.hpp"
#include "cubic_lab/spectrum.hpp"

using namespace cubic_lab;
using cdouble = std::complex<double>;

TEST_CASE("levels on the positive axis are real, simple, node-verified") {
  for (double b : {0.1, 1.0, 10.0}) {
    for (int n : {0, 2}) {
      auto lv = level(CutParameter(b, 0.0), n, 1e-9);
      CHECK(std::abs(lv.energy.imag()) <= 1e-8 * (1.0 + std::abs(lv.energy)));
      CHECK(lv.energy.real() > 2.0 * n + 1 - 1e-9);
      CHECK(lv.truncation_estimate <= 1e-9 * (1.0 + std::abs(lv.energy)));
      CHECK(lv.simplicity_gap > 10.0 * lv.truncation_estimate);
      CHECK(lv.node_verified);
    }
  }
}

TEST_CASE("ground level at beta = 1 matches the shooting oracle") {
  auto lv = level(CutParameter(1.0, 0.0), 0, 1e-10);
  auto sh = shoot_eigenvalue({1.0, 0.0}, {0.0, 1.0}, {1.29, 0.0});
  CHECK(sh.converged);
  CHECK(std::abs(lv.energy - sh.energy) < 1e-8);
}

TEST_CASE("small-beta extrapolation recovers the harmonic levels") {
  for (int n : {0, 1, 2}) {
    // E is analytic at 0 along the axis: Richardson on a halving ladder
    std::vector<double> r;
    for (double b : {0.01, 0.005, 0.0025, 0.00125})
      r.push_back(level(CutParameter(b, 0.0), n, 1e-10).energy.real());
    for (std::size_t m = 1; m < 4; ++m)
      for (std::size_t k = 0; k + m < 4; ++k)
        r[k] = r[k + 1] + (r[k + 1] - r[k]) / (std::pow(2.0, m) - 1.0);
    double e0 = r[0];
    CHECK(std::abs(e0 - (2.0 * n + 1)) < 1e-4);
  }
}

TEST_CASE("conjugation symmetry, including close to the cut") {
  for (double arg : {1.0, 2.8}) {
    auto up = level(CutParameter(0.5, arg), 1, 1e-9);
    auto dn = level(CutParameter(0.5, -arg), 1, 1e-9);
    CHECK(std::abs(up.energy - std::conj(dn.energy)) <
          1e-8 * (1.0 + std::abs(up.energy)));
  }
  // golden value from the continuation ladder cross-check
  auto lv = level(CutParameter(0.5, -2.8), 1, 1e-9);
  CHECK(std::abs(lv.energy - cdouble(3.104938400, -1.468601221)) < 1e-6);
  CHECK(lv.node_verified);
}

TEST_CASE("closed-loop continuation has trivial monodromy") {
  ParameterPath path;
  for (auto [m, a] : {std::pair{0.5, -1.5}, {2.0, -1.5}, {2.0, 1.5},
                      {0.5, 1.5}, {0.5, -1.5}})
    path.waypoints.push_back(CutParameter(m, a));
  auto run = continue_level(path, 1, 1e-8);
  REQUIRE(run.size() == path.waypoints.size());
  CHECK(std::abs(run.front().energy - run.back().energy) <
        1e-6 * (1.0 + std::abs(run.front().energy)));
  for (const auto& lv : run) CHECK(lv.node_verified);
}

TEST_CASE("boundary limits: plateau, sign, conjugation") {
  auto up = boundary_limit(1.0, +1, 0, 1e-6);
  CHECK(up.energy.imag() > 0.0);
  CHECK(up.stability <= 1e-5);
  auto dn = boundary_limit(1.0, -1, 0, 1e-6);
  CHECK(dn.energy.imag() < 0.0);
  CHECK(std::abs(up.energy - std::conj(dn.energy)) < 1e-6);
}

TEST_CASE("boundary limit approaches the harmonic level as b -> 0") {
  auto bv = boundary_limit(0.1, +1, 0, 1e-7);
  CHECK(std::abs(bv.energy.real() - 1.0) < 0.2);
  CHECK(bv.energy.imag() > 0.0);
  CHECK(bv.energy.imag() < 0.1);  // tunneling-suppressed width
}

TEST_CASE("infinite-coupling levels match the shooting oracle") {
  double l0 = limit_eigenvalue(0, 1e-8);
  double l1 = limit_eigenvalue(1, 1e-8);
  CHECK(std::abs(l0 - 1.15626707198) < 1e-6);
  CHECK(std::abs(l1 - 4.109228752806) < 1e-6);
  double prev = 0.0;
  for (int n = 0; n <= 4; ++n) {
    double ln = limit_eigenvalue(n, 1e-8);
    CHECK(ln > prev);
    prev = ln;
  }
}

TEST_CASE("large-beta scaling deviations shrink along the modulus ladder") {
  std::vector<CutParameter> ladder{CutParameter(1e2, 0.0), CutParameter(1e4, 0.0)};
  auto dev = scaling_check(ladder, 0);
  REQUIRE(dev.size() == 2);
  CHECK(dev[1] < dev[0]);
  CHECK(dev[1] < 1e-2);
}

TEST_CASE("domain guards") {
  CHECK_THROWS_AS(level(CutParameter(0.0, 0.0), 0, 1e-8), SpectrumError);
  CHECK_THROWS_AS(level(CutParameter(1.0, 0.0), -1, 1e-8), SpectrumError);
  CHECK_THROWS_AS(level(CutParameter(1.0, 0.0), 0, 1e-13), SpectrumError);
  CHECK_THROWS_AS(boundary_sweep({2.0, 1.0}, +1, 0, 1e-6), SpectrumError);
  CHECK_THROWS_AS(boundary_sweep({1.0}, 2, 0, 1e-6), SpectrumError);
}
