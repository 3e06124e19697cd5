#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "cubic_lab/model.hpp"

using namespace cubic_lab;

namespace {

const double pi = CutParameter::pi();

// Closed-form (Cardano) cubic oracle, independent of the companion-matrix path.
std::array<cdouble, 3> cardano(cdouble c3, cdouble c2, cdouble c1, cdouble c0) {
  cdouble a = c2 / c3, b = c1 / c3, c = c0 / c3;
  cdouble p = b - a * a / 3.0;
  cdouble q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  cdouble disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  cdouble u3 = -q / 2.0 + disc;
  if (std::abs(u3) < 1e-30) u3 = -q / 2.0 - disc;
  cdouble u = std::pow(u3, 1.0 / 3.0);
  std::array<cdouble, 3> out;
  const cdouble w = std::polar(1.0, 2.0 * pi / 3.0);
  for (int k = 0; k < 3; ++k) {
    cdouble uk = u * std::pow(w, k);
    out[k] = uk - p / (3.0 * uk) - a / 3.0;
  }
  return out;
}

double match(const std::array<cdouble, 3>& got, cdouble want) {
  double best = 1e300;
  for (auto g : got) best = std::min(best, std::abs(g - want));
  return best;
}

struct Lcg {
  std::uint64_t s = 777;
  double next() {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
  }
};

} // namespace

TEST_CASE("potential values") {
  Potential p{CutParameter(1.0, 0.0)};
  CHECK(std::abs(p.value(1.0) - cdouble(1.0, 1.0)) < 1e-15);
  CHECK(std::abs(p.value(0.0)) == 0.0);
}

TEST_CASE("boundary arguments +pi and -pi give conjugate branches") {
  Potential pp{CutParameter(1.0, pi)};
  Potential pm{CutParameter(1.0, -pi)};
  // PT relation: V at conj beta and -conj(x) is the conjugate value
  cdouble vp = pp.value(1.0);
  cdouble vm = pm.value(-1.0);
  CHECK(std::abs(vp - std::conj(vm)) < 1e-14);
  // the two boundary points are genuinely distinct operators
  CHECK(std::abs(pp.value(1.0) - pm.value(1.0)) > 1.0);
  // sqrt(1 @ pi) = +i, sqrt(1 @ -pi) = -i
  CHECK(std::abs(pp.beta.sqrt_value() - cdouble(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(pm.beta.sqrt_value() - cdouble(0.0, -1.0)) < 1e-15);
}

TEST_CASE("conjugation symmetry of the square-root branch") {
  Lcg rng;
  for (int i = 0; i < 20; ++i) {
    CutParameter b(0.01 + 100.0 * std::abs(rng.next()), pi * 1.99 * rng.next());
    CHECK(std::abs(b.conj().sqrt_value() - std::conj(b.sqrt_value())) < 1e-14);
    double half = b.argument() / 2.0;
    if (half != 0.0)
      CHECK(b.sqrt_value().imag() * half > 0.0);
  }
}

TEST_CASE("turning points of the limiting cubic i y^3 = 1") {
  auto roots = cubic_roots(cdouble(0.0, 1.0), 0.0, 0.0, cdouble(-1.0));
  CHECK(match(roots, std::polar(1.0, -pi / 6.0)) < 1e-10);
  CHECK(match(roots, std::polar(1.0, -5.0 * pi / 6.0)) < 1e-10);
  CHECK(match(roots, std::polar(1.0, pi / 2.0)) < 1e-10);
}

TEST_CASE("turning points at beta=1, E=0: double root at 0 plus i") {
  Potential p{CutParameter(1.0, 0.0)};
  auto tp = turning_points(p, 0.0);
  CHECK(match(tp.roots, cdouble(0.0)) < 1e-7);
  CHECK(match(tp.roots, cdouble(0.0, 1.0)) < 1e-9);
  CHECK(tp.ill_conditioned);  // clustered double root is flagged, not fatal
}

TEST_CASE("turning points agree with a closed-form oracle") {
  Potential p{CutParameter(1.0, 0.0)};
  auto tp = turning_points(p, 1.0);
  auto oracle = cardano(cdouble(0.0, 1.0), 1.0, 0.0, cdouble(-1.0));
  for (auto r : oracle) CHECK(match(tp.roots, r) < 1e-9);
  CHECK(tp.max_residual <= 1e-12 * 2.0);
}

TEST_CASE("turning point residuals on a random grid") {
  Lcg rng;
  for (int i = 0; i < 25; ++i) {
    CutParameter b(0.05 + 30.0 * std::abs(rng.next()), pi * 1.9 * rng.next());
    cdouble E(10.0 * rng.next() + 6.0, 10.0 * rng.next());
    Potential p{b};
    auto tp = turning_points(p, E);
    CHECK(tp.max_residual <= 1e-12 * (1.0 + std::abs(E)));
  }
}

TEST_CASE("energy-dominant frame at |E| = 64") {
  auto f = make_frame(FrameKind::energy_dominant, cdouble(64.0), CutParameter(1.0, 0.0));
  CHECK(f.h == doctest::Approx(1.0 / 32.0).epsilon(1e-14));
  CHECK(std::abs(f.lambda - cdouble(1.0)) < 1e-14);
  CHECK(std::abs(std::abs(f.lambda) - 1.0) < 1e-14);
  CHECK(std::abs(f.x_map - cdouble(4.0)) < 1e-13);
}

TEST_CASE("beta-large frame x_map") {
  auto f = make_frame(FrameKind::beta_large, cdouble(1.0), CutParameter(1e6, 0.0));
  CHECK(std::abs(f.x_map - cdouble(std::pow(10.0, -0.6))) < 1e-14);
}

TEST_CASE("coupling-small-A frame alpha") {
  auto f = make_frame(FrameKind::coupling_small_a, cdouble(10.0), CutParameter(1e-3, 0.0));
  CHECK(f.alpha == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(f.alpha > 0.0);
  CHECK(f.alpha <= 1.0);
}

TEST_CASE("frame round trip x_map * y") {
  auto f = make_frame(FrameKind::energy_dominant, cdouble(7.0, 3.0), CutParameter(2.0, 1.0));
  cdouble x(1.25, -0.5);
  cdouble y = x / f.x_map;
  CHECK(std::abs(f.x_map * y - x) <= 1e-14 * std::abs(x));
}

TEST_CASE("zero energy / zero coupling are domain errors") {
  CHECK_THROWS(make_frame(FrameKind::energy_dominant, cdouble(0.0), CutParameter(1.0, 0.0)));
  CHECK_THROWS(make_frame(FrameKind::beta_large, cdouble(1.0), CutParameter(0.0, 0.0)));
  CHECK_THROWS(turning_points(Potential{CutParameter(0.0, 0.0)}, cdouble(1.0)));
}

TEST_CASE("frame turning-point split: two low, one in upper half-plane") {
  // Re(lambda) > 0 frames with small h
  Lcg rng;
  for (int i = 0; i < 10; ++i) {
    cdouble E = std::polar(200.0 + 500.0 * std::abs(rng.next()), 0.6 * rng.next());
    CutParameter b(1.0 + 3.0 * std::abs(rng.next()), 1.5 * rng.next());
    auto f = make_frame(FrameKind::energy_dominant, E, b);
    REQUIRE(f.lambda.real() > 0.0);
    auto roots = cubic_roots(f.c3, f.c2, 0.0, -f.lambda);
    double cap = f.strip_constant * std::pow(f.h, 0.4);
    int low = 0, upper = 0;
    for (auto r : roots) {
      if (r.imag() < cap) ++low;
      if (r.imag() > 0.0) ++upper;
    }
    CHECK(low == 2);
    CHECK(upper >= 1);
  }
}
