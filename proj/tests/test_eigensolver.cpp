#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <complex>

#include "cubic_lab/eigensolver.hpp"

using namespace cubic_lab;

namespace {

std::vector<cdouble> sorted_by_real(std::vector<cdouble> v) {
  std::sort(v.begin(), v.end(), [](cdouble a, cdouble b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return v;
}

struct Lcg {
  std::uint64_t s = 12345;
  double next() {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
  }
};

} // namespace

TEST_CASE("identity matrix") {
  auto e = all_eigenvalues(CMatrix::identity(5), 1e-12);
  REQUIRE(e.size() == 5);
  for (auto v : e) CHECK(std::abs(v - cdouble(1.0)) < 1e-12);
}

TEST_CASE("involution [[0,1],[1,0]]") {
  CMatrix m(2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  auto e = sorted_by_real(all_eigenvalues(m, 1e-12));
  CHECK(std::abs(e[0] - cdouble(-1.0)) < 1e-12);
  CHECK(std::abs(e[1] - cdouble(1.0)) < 1e-12);
}

TEST_CASE("companion of z^3 - 1 gives cube roots of unity") {
  CMatrix m(3);
  m(0, 2) = 1.0;
  m(1, 0) = 1.0;
  m(2, 1) = 1.0;
  auto e = all_eigenvalues(m, 1e-14);
  const double pi = CutParameter::pi();
  for (int k = 0; k < 3; ++k) {
    cdouble root = std::polar(1.0, 2.0 * pi * k / 3.0);
    double best = 1e9;
    for (auto v : e) best = std::min(best, std::abs(v - root));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("eigenvalue sum equals trace on random matrices") {
  Lcg rng;
  for (int trial = 0; trial < 3; ++trial) {
    std::size_t n = 20 + 10 * trial;
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = cdouble(rng.next(), rng.next());
    auto e = all_eigenvalues(m, 1e-12);
    cdouble s = 0.0;
    for (auto v : e) s += v;
    CHECK(std::abs(s - m.trace()) < 1e-10 * m.inf_norm());
  }
}

TEST_CASE("spectrum invariant under permutation similarity") {
  Lcg rng;
  std::size_t n = 15;
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = cdouble(rng.next(), rng.next());
  // cyclic permutation
  CMatrix p(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) = m((i + 3) % n, (j + 3) % n);
  auto e1 = sorted_by_real(all_eigenvalues(m, 1e-12));
  auto e2 = sorted_by_real(all_eigenvalues(p, 1e-12));
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(e1[i] - e2[i]) < 1e-8);
}

TEST_CASE("determinant relation on small matrices") {
  // product of eigenvalues of [[2,1],[1,2]] is det = 3
  CMatrix m(2);
  m(0, 0) = 2.0; m(0, 1) = 1.0; m(1, 0) = 1.0; m(1, 1) = 2.0;
  auto e = all_eigenvalues(m, 1e-12);
  CHECK(std::abs(e[0] * e[1] - cdouble(3.0)) < 1e-12);
}

TEST_CASE("inverse iteration on diag(1,3,5)") {
  BandedComplexMatrix m(3, 3);
  m.diag(0, 0) = 1.0;
  m.diag(0, 1) = 3.0;
  m.diag(0, 2) = 5.0;
  std::vector<cdouble> spec{1.0, 3.0, 5.0};
  auto pair = eigenvector_near(m, cdouble(2.9), 1e-12, &spec);
  CHECK(std::abs(pair.value - cdouble(3.0)) < 1e-10);
  CHECK(std::abs(pair.vector[1]) > 0.999);
  CHECK(pair.residual < 1e-10);
}

TEST_CASE("ambiguous shift is a named error") {
  BandedComplexMatrix m(2, 1);
  m.diag(0, 0) = 1.0;
  m.diag(0, 1) = 3.0;
  std::vector<cdouble> spec{1.0, 3.0};
  CHECK_THROWS_AS(eigenvector_near(m, cdouble(2.0), 1e-12, &spec), EigenvalueError);
}
