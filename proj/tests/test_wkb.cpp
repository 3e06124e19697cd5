#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "cubic_lab/eigensolver.hpp"
#include "cubic_lab/hermite.hpp"
#include "cubic_lab/nodes.hpp"
#include "cubic_lab/wkb.hpp"

using namespace cubic_lab;

namespace {

constexpr double kPi = 3.14159265358979323846;

const AntiStokesDiagram& unit_diagram() {
  static AntiStokesDiagram dg = trace_diagram(limit_frame(1.0, {1.0, 0.0}),
                                              {1.0, 0.0});
  return dg;
}

cdouble nearest_turning(const AntiStokesDiagram& dg, cdouble target) {
  cdouble best = dg.turning[0];
  for (auto t : dg.turning)
    if (std::abs(t - target) < std::abs(best - target)) best = t;
  return best;
}

// traced point on a line attached to y+ closest to |y - y+| = r
cdouble point_at_radius(const AntiStokesDiagram& dg, cdouble yp, double r) {
  cdouble best = yp;
  double miss = 1e300;
  for (const auto& line : dg.lines) {
    if (std::abs(line.points.front() - yp) > 1e-9 && !line.bounded) continue;
    for (auto p : line.points) {
      double d = std::abs(std::abs(p - yp) - r);
      if (d < miss) {
        miss = d;
        best = p;
      }
    }
  }
  return best;
}

double dist_to_polyline(cdouble z, const std::vector<cdouble>& pts) {
  double best = 1e300;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    cdouble a = pts[k], d = pts[k + 1] - pts[k];
    double t = std::clamp(((z - a) * std::conj(d)).real() / std::norm(d), 0.0,
                          1.0);
    best = std::min(best, std::abs(z - a - t * d));
  }
  return best;
}

struct Pair {
  std::vector<cdouble> coeffs;
  cdouble E;
  double omega;
};

Pair positive_axis_pair(double b, int n, std::size_t N) {
  double omega = std::max(1.0, std::pow(b, 0.2));
  auto m = assemble_cubic(CutParameter(b, 0.0), N, omega);
  auto evs = all_eigenvalues(m.dense(), 1e-12);
  std::vector<cdouble> reals;
  for (auto e : evs)
    if (std::abs(e.imag()) < 1e-6 * (1.0 + std::abs(e))) reals.push_back(e);
  std::sort(reals.begin(), reals.end(),
            [](cdouble x, cdouble y) { return x.real() < y.real(); });
  auto pr = eigenvector_near(m, reals.at(n), 1e-12, &evs);
  return {pr.vector, reals.at(n), omega};
}

} // namespace

TEST_CASE("turning points of the limit polynomial at lambda = 1") {
  const auto& dg = unit_diagram();
  for (cdouble want : {std::polar(1.0, -kPi / 6.0), std::polar(1.0, -5.0 * kPi / 6.0),
                       std::polar(1.0, kPi / 2.0)})
    CHECK(std::abs(nearest_turning(dg, want) - want) < 1e-10);
}

TEST_CASE("anti-Stokes lines: action drift, classification, topology") {
  const auto& dg = unit_diagram();
  CHECK(dg.lines.size() == 9);
  int bounded = 0;
  for (const auto& line : dg.lines) {
    CHECK(line.max_im_action < 1e-8);
    if (line.bounded) {
      ++bounded;
      CHECK(line.endpoint != line.origin);
    } else {
      double dir = (4.0 * line.sibuya_index - 3.0) * kPi / 10.0;
      CHECK(std::abs(std::remainder(line.direction - dir, 2.0 * kPi)) < 1e-3);
    }
  }
  // the y+ <-> y- line, once from each end
  CHECK(bounded == 2);
  // the sector attached to y+ spans the far positive real axis: its two
  // unbounded edges approach the Sibuya directions on either side of R+
  cdouble yp = nearest_turning(dg, std::polar(1.0, -kPi / 6.0));
  bool above = false, below = false;
  for (const auto& line : dg.lines) {
    if (std::abs(line.points.front() - yp) > 1e-9 || line.bounded) continue;
    if (line.sibuya_index == 1) above = true;
    if (line.sibuya_index == 5) below = true;
  }
  CHECK(above);
  CHECK(below);
}

TEST_CASE("diagram is symmetric under y -> -conj(y) at lambda = 1") {
  const auto& dg = unit_diagram();
  for (auto t : dg.turning) {
    cdouble mirror = -std::conj(t);
    CHECK(std::abs(nearest_turning(dg, mirror) - mirror) < 1e-10);
  }
  // mirror a few points of every line onto some traced line
  for (const auto& line : dg.lines) {
    for (std::size_t k = 10; k < line.points.size(); k += line.points.size() / 4) {
      cdouble mirror = -std::conj(line.points[k]);
      double best = 1e300;
      for (const auto& other : dg.lines)
        best = std::min(best, dist_to_polyline(mirror, other.points));
      CHECK(best < 1e-5);
    }
  }
}

TEST_CASE("the bounded line retraced from the far end agrees pointwise") {
  const auto& dg = unit_diagram();
  const AntiStokesLine* fwd = nullptr;
  const AntiStokesLine* rev = nullptr;
  for (const auto& line : dg.lines)
    if (line.bounded) (fwd ? rev : fwd) = &line;
  REQUIRE(fwd);
  REQUIRE(rev);
  double worst = 0.0;
  for (std::size_t k = 0; k < fwd->points.size(); k += 7)
    worst = std::max(worst, dist_to_polyline(fwd->points[k], rev->points));
  CHECK(worst < 1e-6);
}

TEST_CASE("zero density: closed form against the numeric loop integral") {
  const auto& dg = unit_diagram();
  cdouble yp = nearest_turning(dg, std::polar(1.0, -kPi / 6.0));
  for (double r : {0.05, 0.1}) {
    cdouble y0 = point_at_radius(dg, yp, r);
    auto est = zero_density(1.0, {1.0, 0.0}, y0, 0.01);
    CHECK(std::abs(est.y_plus - yp) < 1e-10);
    CHECK(est.N0 > 0.0);
    CHECK(est.predicted == doctest::Approx(est.N0 / 0.01));
    CHECK(std::abs(est.N0 + est.correction - est.loop_integral) <=
          0.01 * est.loop_integral);
  }
}

TEST_CASE("zero density scales as the 3/2 power of the segment length") {
  const auto& dg = unit_diagram();
  cdouble yp = nearest_turning(dg, std::polar(1.0, -kPi / 6.0));
  cdouble ya = point_at_radius(dg, yp, 0.03);
  cdouble yb = point_at_radius(dg, yp, 0.06);
  auto ea = zero_density(1.0, {1.0, 0.0}, ya, 0.01);
  auto eb = zero_density(1.0, {1.0, 0.0}, yb, 0.01);
  double ra = std::abs(ya - yp), rb = std::abs(yb - yp);
  double expect = std::pow(rb / ra, 1.5);
  CHECK(std::abs(eb.loop_integral / ea.loop_integral - expect) <=
        0.02 * expect);
}

TEST_CASE("off-line points are rejected") {
  const auto& dg = unit_diagram();
  cdouble yp = nearest_turning(dg, std::polar(1.0, -kPi / 6.0));
  cdouble y0 = point_at_radius(dg, yp, 0.05);
  CHECK_THROWS_AS(zero_density(1.0, {1.0, 0.0}, y0 + cdouble(0.0, 0.01), 0.01),
                  WkbError);
}

TEST_CASE("node counts near the segment scale like 1/h across levels") {
  // frame h shrinks with the level; the zeros hugging the anti-Stokes arc
  // multiply accordingly (Eq.-(18)-style ratio test, coarse by design)
  double counts[2], hs[2];
  int idx = 0;
  for (int n : {3, 6}) {
    auto pr = positive_axis_pair(10.0, n, 256);
    auto frame = make_frame(FrameKind::energy_dominant, pr.E, CutParameter(10.0, 0.0));
    auto dg = trace_diagram(frame, frame.lambda);
    cdouble yp = nearest_turning(dg, std::polar(std::abs(dg.turning[0]), -kPi / 6.0));
    const AntiStokesLine* arc = nullptr;
    for (const auto& line : dg.lines)
      if (line.bounded && std::abs(line.points.front() - yp) < 1e-9) arc = &line;
    REQUIRE(arc);
    double scale = std::abs(yp);
    Rectangle rect{-1.3 * scale * std::abs(frame.x_map),
                   1.3 * scale * std::abs(frame.x_map),
                   -0.8 * scale * std::abs(frame.x_map), 0.05};
    auto zeros = locate_zeros(pr.coeffs, pr.omega, rect);
    int near = 0;
    for (auto z : zeros)
      if (dist_to_polyline(z / frame.x_map, arc->points) < 0.2 * scale) ++near;
    counts[idx] = near;
    hs[idx] = frame.h;
    ++idx;
  }
  CHECK(counts[0] >= 3);
  double ratio = counts[1] / counts[0];
  double expect = hs[0] / hs[1];
  CHECK(std::abs(ratio - expect) <= 0.2 * expect);
}

TEST_CASE("appendix bound: h |phi'/phi| stays bounded off the zeros") {
  double cleared[3];
  int idx = 0;
  for (double b : {10.0, 100.0, 1000.0}) {
    auto pr = positive_axis_pair(b, 2, 384);
    auto frame = make_frame(FrameKind::energy_dominant, pr.E, CutParameter(b, 0.0));
    auto rep = appendix_bound_check(pr.coeffs, pr.omega, frame, 0.5);
    CHECK(rep.cleared_samples > 200);
    CHECK(rep.zeros_used >= 2);
    CHECK(rep.inside_max > rep.cleared_max);  // the pole shows inside the disk
    cleared[idx++] = rep.cleared_max;
  }
  double lo = std::min({cleared[0], cleared[1], cleared[2]});
  double hi = std::max({cleared[0], cleared[1], cleared[2]});
  CHECK(hi < 3.0 * lo);
}

TEST_CASE("domain guards") {
  CHECK_THROWS_AS(trace_diagram(limit_frame(1.0, {1.0, 0.0}), {-1.0, 0.0}),
                  WkbError);
  CHECK_THROWS_AS(zero_density(-1.0, {1.0, 0.0}, {0.9, -0.5}, 0.01), WkbError);
  CHECK_THROWS_AS(zero_density(1.0, {1.0, 0.0}, {0.9, -0.5}, -0.01), WkbError);
}
