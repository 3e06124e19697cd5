#include "cubic_lab/nodes.hpp"

#include <algorithm>
#include <cmath>

#include "cubic_lab/model.hpp"

namespace cubic_lab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double reduce_phase(double d) {
  while (d > kPi) d -= 2.0 * kPi;
  while (d <= -kPi) d += 2.0 * kPi;
  return d;
}

struct PhaseSample {
  cdouble x;
  double theta = 0.0;   // continuous phase representative (mod 2 pi)
  double margin = 0.0;  // |psi| mantissa over tail estimate
};

class PhaseTracker {
public:
  PhaseTracker(const std::vector<cdouble>& coeffs, double omega, cdouble rot)
      : coeffs_(coeffs), omega_(omega), rot_(rot) {}

  PhaseSample sample(cdouble x) {
    auto v = eigenfunction_value(coeffs_, omega_, rot_ * x);
    PhaseSample s;
    s.x = x;
    s.theta = std::arg(v.value) + v.log_scale.imag();
    s.margin = std::abs(v.value) / std::max(v.tail_estimate, 1e-300);
    min_margin_ = std::min(min_margin_, s.margin);
    ++samples_;
    return s;
  }

  // continuous phase change along the segment [a.x, b.x]
  double track(const PhaseSample& a, const PhaseSample& b, int depth) {
    double d = reduce_phase(b.theta - a.theta);
    if (std::abs(d) <= 0.8) return d;
    if (depth <= 0)
      throw NodeError("phase tracking failed to resolve; contour too close to a zero");
    PhaseSample mid = sample(0.5 * (a.x + b.x));
    return track(a, mid, depth - 1) + track(mid, b, depth - 1);
  }

  double min_margin() const { return min_margin_; }
  int samples() const { return samples_; }

private:
  const std::vector<cdouble>& coeffs_;
  double omega_;
  cdouble rot_;
  double min_margin_ = std::numeric_limits<double>::infinity();
  int samples_ = 0;
};

} // namespace

// Winding over the rectangle mapped by rot = e^{-i theta}: same zero count by
// the argument principle, but evaluated where the expansion is trustworthy.
NodeCount winding_count_rot(const std::vector<cdouble>& coeffs, double omega,
                            const Rectangle& rect, cdouble rot) {
  if (!(rect.top > rect.bottom) || !(rect.right > rect.left))
    throw NodeError("winding_count: degenerate rectangle");
  BasisFunctionSet basis{coeffs.size(), omega};
  double corner = std::hypot(std::max(std::abs(rect.left), std::abs(rect.right)),
                             std::max(std::abs(rect.top), std::abs(rect.bottom)));
  if (corner > basis.evaluation_radius())
    throw NodeError("winding_count: contour leaves the evaluation disk; "
                    "increase the basis size");

  const cdouble corners[4] = {
      {rect.left, rect.bottom},
      {rect.right, rect.bottom},
      {rect.right, rect.top},
      {rect.left, rect.top}};

  PhaseTracker tracker(coeffs, omega, rot);
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    cdouble a = corners[e], b = corners[(e + 1) % 4];
    int segs = std::max(8, static_cast<int>(std::ceil(2.0 * std::abs(b - a))));
    PhaseSample prev = tracker.sample(a);
    for (int i = 1; i <= segs; ++i) {
      PhaseSample next =
          tracker.sample(a + (b - a) * (static_cast<double>(i) / segs));
      total += tracker.track(prev, next, 32);
      prev = next;
    }
  }

  NodeCount out;
  double raw = total / (2.0 * kPi);
  out.count = static_cast<int>(std::lround(raw));
  out.winding_residual = std::abs(raw - out.count);
  out.contour.rect = rect;
  out.contour.samples = tracker.samples();
  out.contour.min_margin = tracker.min_margin();
  if (out.winding_residual > 0.05)
    throw NodeError("winding_count: residual above 0.05 after refinement");
  if (out.count < 0)
    throw NodeError("winding_count: negative winding; contour invalid");
  return out;
}

NodeCount winding_count(const std::vector<cdouble>& coeffs, double omega,
                        const Rectangle& rect) {
  return winding_count_rot(coeffs, omega, rect, {1.0, 0.0});
}

namespace {

// Deepest Im x < 0 at which the truncated expansion is still trustworthy.
// Below it, coefficient noise amplified by the e^{sqrt(2k) |Im x|} growth of
// the basis functions swamps psi, so the contour must not dip further.
double certified_extent(const std::vector<cdouble>& coeffs, double omega,
                        double width, double limit, int direction, cdouble rot) {
  // The weakest columns are the corners, where psi is smallest; a dip of the
  // center column near an interior zero recovers past it, so keep scanning.
  double good = 0.1;
  for (double y = 0.1; y <= limit; y *= 1.2) {
    double margin = std::numeric_limits<double>::infinity();
    for (double x : {0.0, 0.55 * width, -0.55 * width, width, -width}) {
      auto v = eigenfunction_value(coeffs, omega, rot * cdouble{x, direction * y});
      margin = std::min(margin,
                        std::abs(v.value) / std::max(v.tail_estimate, 1e-300));
    }
    if (margin >= 30.0) good = y;
  }
  return good;
}

// Winding by direct integration of phi'' = w(z) phi along the polyline,
// anchored on Hermite values at pts[0].  Unlike the truncated expansion this
// has no noise floor at depth: the error is relative, and a wrong admixture
// of the growing second solution is caught by the failure of the loop to
// close in magnitude.
template <class W>
NodeCount ode_winding(W w, const std::vector<cdouble>& pts, cdouble phi,
                      cdouble dphi, bool reversed = false) {
  double phase = 0.0, logmag = 0.0;
  double m0 = std::abs(phi);
  if (!(m0 > 0.0)) throw NodeError("count_nodes: zero anchor value");
  phi /= m0;
  dphi /= m0;
  double prev_arg = std::arg(phi);
  int steps = 0;
  for (std::size_t e = 0; e + 1 < pts.size(); ++e) {
    cdouble a = pts[e], d = pts[e + 1] - pts[e];
    int nstep = std::max(16, static_cast<int>(std::ceil(std::abs(d) / 0.004)));
    cdouble h = d / static_cast<double>(nstep);
    for (int i = 0; i < nstep; ++i) {
      cdouble z = a + h * static_cast<double>(i);
      cdouble k1p = h * dphi, k1q = h * w(z) * phi;
      cdouble wm = w(z + 0.5 * h);
      cdouble k2p = h * (dphi + 0.5 * k1q), k2q = h * wm * (phi + 0.5 * k1p);
      cdouble k3p = h * (dphi + 0.5 * k2q), k3q = h * wm * (phi + 0.5 * k2p);
      cdouble k4p = h * (dphi + k3q), k4q = h * w(z + h) * (phi + k3p);
      phi += (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0;
      dphi += (k1q + 2.0 * k2q + 2.0 * k3q + k4q) / 6.0;
      double m = std::abs(phi);
      if (!(m > 0.0))
        throw NodeError("count_nodes: eigenfunction vanished on the contour");
      double na = std::arg(phi);
      double dp = reduce_phase(na - prev_arg);
      if (std::abs(dp) > 1.5)
        throw NodeError("count_nodes: phase jump on the contour; zero too close");
      phase += dp;
      prev_arg = na;
      logmag += std::log(m);
      phi /= m;
      dphi /= m;
      ++steps;
    }
  }
  NodeCount out;
  double raw = phase / (2.0 * kPi);
  if (reversed) raw = -raw;
  out.count = static_cast<int>(std::lround(raw));
  out.winding_residual = std::abs(raw - out.count);
  out.contour.samples = steps;
  // the loop must return to its starting value: magnitude closure is the
  // error certificate here, reported through the margin field
  double closure = std::abs(logmag);
  out.contour.min_margin =
      std::min(1e6, 0.5 / std::max(out.winding_residual + closure, 1e-7));
  if (out.winding_residual > 0.05)
    throw NodeError("count_nodes: winding residual above 0.05 on the ODE contour");
  if (closure > 0.05)
    throw NodeError("count_nodes: contour loop failed to close in magnitude");
  if (out.count < 0)
    throw NodeError("count_nodes: negative winding; contour invalid");
  return out;
}

} // namespace

NodeCount count_nodes_framed(const std::vector<cdouble>& coeffs, double omega,
                             double theta, const CutParameter& beta, cdouble E) {
  cdouble rot = std::polar(1.0, -theta);
  Potential pot{beta};
  auto tp = turning_points(pot, E);
  double rmax = 0.0, remax = 0.0;
  for (auto r : tp.roots) {
    rmax = std::max(rmax, std::abs(r));
    remax = std::max(remax, std::abs(r.real()));
  }
  // nodes live within the real turning-point extent; wider rectangles only
  // degrade the corner certification where psi is exponentially small
  double R = remax + 1.5;
  double strip = (2.0 / (3.0 * std::sqrt(beta.modulus()))) *
                 std::cos(0.5 * beta.argument());
  double depth = std::min(R, certified_extent(coeffs, omega, R, R, -1, rot));
  // any top edge inside the zero-free strip separates the nodes from the
  // upper-half-plane zeros; cap it at the certified height
  double top =
      std::min(strip, certified_extent(coeffs, omega, R, strip, +1, rot));

  // Trusted total over a tight rectangle deep enough for every node, followed
  // along the differential equation from an anchor on the top edge.  The
  // contour stays close to the turning-point hull: at the corners psi is
  // exponentially small, and any anchor error would otherwise be amplified
  // into spurious windings there.
  const cdouble f2 = std::polar(1.0, 2.0 * theta);
  const cdouble c3 =
      cdouble(0.0, 1.0) * beta.sqrt_value() * std::polar(1.0, 3.0 * theta);
  auto w = [&](cdouble z) { return f2 * (f2 * z * z + c3 * z * z * z - E); };
  // The tight contour hugs the turning points shaping the node region: the
  // nodes trace the anti-Stokes curve between the two primary roots, so the
  // depth follows how far those dip below the axis, not their moduli.  In
  // the small-beta regime the third root sits at the far barrier scale
  // ~1/sqrt(beta) and is excluded, or the corners would reach into the
  // amplification region and the anchor error would fake extra windings.
  double rmin = std::numeric_limits<double>::infinity();
  for (auto r : tp.roots) rmin = std::min(rmin, std::abs(r));
  double dlow = 0.0, rewide = 0.0;
  for (auto r : tp.roots) {
    if (std::abs(r) > 2.2 * rmin) continue;
    dlow = std::max(dlow, -r.imag());
    rewide = std::max(rewide, std::abs(r.real()));
  }
  double Ro = rewide + 0.6, D = dlow + 0.6;  // refined below once w is known
  // any top edge strictly inside the strip is valid; take the one whose
  // anchor value carries the best certificate, since the anchor error is
  // what the corner amplification acts on
  double tcap = std::min(0.8 * strip, top);
  double atop = tcap, abest = 0.0;
  for (double cand : {tcap, std::min(tcap, 0.6), std::min(tcap, 0.35),
                      std::min(tcap, 0.2)}) {
    auto v = eigenfunction_value(coeffs, omega, rot * cdouble(0.0, cand));
    double mg = std::abs(v.value) / std::max(v.tail_estimate, 1e-300);
    if (mg > abest) {
      abest = mg;
      atop = cand;
    }
  }
  if (abest < 1e3)
    throw NodeError("count_nodes: anchor value uncertified; "
                    "increase the basis size");
  // The bottom of the contour follows the node arc instead of a flat edge:
  // the nodes trace the anti-Stokes curve between the primary turning roots,
  // so a slanted bottom through (Re q, Im q - pad) stays a fixed clearance
  // under them.  A flat bottom at the deepest root leaves the shallow end
  // with a large dead pocket where the anchor error, amplified by e^{2 Re S},
  // fakes windings of the second solution.
  std::vector<cdouble> lower;  // primary roots shaping the arc, left to right
  for (auto r : tp.roots) {
    if (std::abs(r) > 2.2 * rmin) continue;
    if (r.imag() > 0.1) continue;
    lower.push_back(r);
  }
  std::sort(lower.begin(), lower.end(),
            [](cdouble a, cdouble b) { return a.real() < b.real(); });
  NodeError last("count_nodes: unreachable");
  NodeCount total;
  bool have_total = false;
  // clearance under the arc in units of the local wavelength: the amplified
  // anchor error grows like e^{2 pad |sqrt w|}, so a fixed pad that is safe
  // at small beta overruns the error budget once |w| grows with the coupling
  double pad = 0.6;
  if (!lower.empty()) {
    cdouble qd = lower.front();
    for (auto q : lower)
      if (q.imag() < qd.imag()) qd = q;
    double sqw = std::sqrt(std::abs(w(rot * (qd - cdouble(0.0, 0.4)))));
    pad = std::clamp(2.2 / std::max(sqw, 1e-6), 0.22, 0.6);
    Ro = rewide + pad;  // the side walls carry the same error budget
  }
  for (int attempt = 0; attempt < 4 && !have_total; ++attempt) {
    auto v = eigenfunction_value(coeffs, omega, rot * cdouble(0.0, atop));
    std::vector<cdouble> pts{{0.0, atop}, {-Ro, atop}};
    if (lower.size() >= 2) {
      pts.push_back({-Ro, lower.front().imag() - pad});
      for (auto q : lower) pts.push_back({q.real(), q.imag() - pad});
      pts.push_back({Ro, lower.back().imag() - pad});
    } else {
      pts.push_back({-Ro, -D});
      pts.push_back({Ro, -D});
    }
    pts.push_back({Ro, atop});
    pts.push_back({0.0, atop});
    Rectangle rect{-Ro, Ro, 0.0, atop};
    for (const auto& p : pts) rect.bottom = std::min(rect.bottom, p.imag());
    // mirror symmetry beta -> conj(beta) maps the node set by z -> -conj(z);
    // ascend the deep wall in either orientation, or the long climb past the
    // shallow end picks up the amplified anchor error
    bool deep_left =
        lower.size() >= 2 && lower.front().imag() < lower.back().imag();
    if (deep_left) std::reverse(pts.begin(), pts.end());
    for (auto& p : pts) p *= rot;
    try {
      total = ode_winding(w, pts, v.value, v.derivative, deep_left);
      total.contour.rect = rect;
      have_total = true;
    } catch (const NodeError& err) {
      last = err;
      if (attempt % 2 == 0)
        Ro *= 1.05;
      else {
        pad *= 1.15;
        D *= 1.08;
      }
    }
  }
  if (!have_total) throw last;

  // corroborate with the certified-expansion contour when its depth reaches
  // the node region; its margins make the nicer certificate, so prefer it
  // whenever the two counts agree
  if (depth >= std::min(0.3, 0.2 * rmax) && top >= 0.05) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      Rectangle rect{-R, R, -depth, top};
      try {
        NodeCount out = winding_count_rot(coeffs, omega, rect, rot);
        if (out.contour.min_margin < 10.0)
          throw NodeError("count_nodes: contour margin below 10x evaluation error");
        if (out.count == total.count) return out;
        break;  // shallow contour missed deep nodes; fall back to the total
      } catch (const NodeError&) {
        if (attempt % 2 == 0)
          R *= 1.1;
        else
          depth *= 0.75;
      }
    }
  }
  return total;
}

NodeCount count_nodes(const std::vector<cdouble>& coeffs, double omega,
                      const CutParameter& beta, cdouble E) {
  return count_nodes_framed(coeffs, omega, 0.0, beta, E);
}

StripReport strip_clearance(const std::vector<cdouble>& coeffs, double omega,
                            const CutParameter& beta, cdouble E) {
  BasisFunctionSet basis{coeffs.size(), omega};
  Potential pot{beta};
  auto tp = turning_points(pot, E);
  double rmax = 0.0, remax = 0.0;
  for (auto r : tp.roots) {
    rmax = std::max(rmax, std::abs(r));
    remax = std::max(remax, std::abs(r.real()));
  }
  double strip = (2.0 / (3.0 * std::sqrt(beta.modulus()))) *
                 std::cos(0.5 * beta.argument());
  double extent = std::min(remax + 1.5, 0.95 * basis.evaluation_radius());
  // sample only the certifiable part of the strip; higher up the truncation
  // noise would fake a violation
  double cert_up = certified_extent(coeffs, omega, extent, extent, +1, {1.0, 0.0});
  double top = std::min(strip, cert_up);

  StripReport rep;
  rep.strip_min_margin = std::numeric_limits<double>::infinity();
  for (int iy = 0; iy <= 8; ++iy) {
    double y = top * iy / 8.0;
    for (int ix = -40; ix <= 40; ++ix) {
      cdouble x(extent * ix / 40.0, y);
      auto v = eigenfunction_value(coeffs, omega, x);
      rep.strip_min_margin = std::min(
          rep.strip_min_margin,
          std::abs(v.value) / std::max(v.tail_estimate, 1e-300));
    }
  }

  // boundaries of the two large-|x| zero-free sectors near the real axis
  double arg_b = beta.argument();
  double angles[4] = {0.0, (kPi - arg_b) / 10.0, kPi - (kPi + arg_b) / 10.0, kPi};
  double r0 = std::min(rmax + 1.0, 0.5 * extent);
  rep.sector_min_margin = std::numeric_limits<double>::infinity();
  for (double ang : angles) {
    for (int ir = 0; ir <= 20; ++ir) {
      double r = r0 + (extent - r0) * ir / 20.0;
      cdouble x = std::polar(r, ang);
      if (x.imag() > cert_up) continue;
      auto v = eigenfunction_value(coeffs, omega, x);
      rep.sector_min_margin = std::min(
          rep.sector_min_margin,
          std::abs(v.value) / std::max(v.tail_estimate, 1e-300));
    }
  }
  rep.clear = rep.strip_min_margin >= 10.0 && rep.sector_min_margin >= 10.0;
  return rep;
}

InvarianceReport node_invariance(const std::vector<PathCheckpoint>& checkpoints, int n) {
  InvarianceReport rep;
  rep.expected = n;
  rep.invariant = true;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const auto& cp = checkpoints[i];
    auto nc = count_nodes(cp.coeffs, cp.omega, cp.beta, cp.E);
    rep.counts.push_back(nc.count);
    if (nc.count != n && rep.first_offender < 0) {
      rep.invariant = false;
      rep.first_offender = static_cast<int>(i);
    }
  }
  return rep;
}

namespace {

void locate_recursive(const std::vector<cdouble>& coeffs, double omega,
                      Rectangle rect, int depth, std::vector<cdouble>& out) {
  NodeCount nc;
  try {
    nc = winding_count(coeffs, omega, rect);
  } catch (const NodeError&) {
    // nudge the edges off a zero and retry once
    double dx = 0.017 * (rect.right - rect.left);
    double dy = 0.013 * (rect.top - rect.bottom);
    rect.left -= dx;
    rect.right += dx;
    rect.top += dy;
    nc = winding_count(coeffs, omega, rect);
  }
  if (nc.count == 0) return;
  double diam = std::hypot(rect.right - rect.left, rect.top - rect.bottom);
  if ((nc.count == 1 && diam < 0.5) || depth == 0) {
    // Newton from the center, scale-free step -psi/psi'
    cdouble x(0.5 * (rect.left + rect.right), 0.5 * (rect.top + rect.bottom));
    for (int it = 0; it < 50; ++it) {
      auto v = eigenfunction_value(coeffs, omega, x);
      cdouble step = v.value / v.derivative;
      x -= step;
      if (std::abs(step) < 1e-13 * (1.0 + std::abs(x))) break;
    }
    out.push_back(x);
    return;
  }
  if (rect.right - rect.left > rect.top - rect.bottom) {
    double cx = 0.5 * (rect.left + rect.right);
    locate_recursive(coeffs, omega, {rect.left, cx, rect.bottom, rect.top},
                     depth - 1, out);
    locate_recursive(coeffs, omega, {cx, rect.right, rect.bottom, rect.top},
                     depth - 1, out);
  } else {
    double cy = 0.5 * (rect.top + rect.bottom);
    locate_recursive(coeffs, omega, {rect.left, rect.right, rect.bottom, cy},
                     depth - 1, out);
    locate_recursive(coeffs, omega, {rect.left, rect.right, cy, rect.top},
                     depth - 1, out);
  }
}

} // namespace

std::vector<cdouble> locate_zeros(const std::vector<cdouble>& coeffs, double omega,
                                  const Rectangle& rect) {
  std::vector<cdouble> raw;
  locate_recursive(coeffs, omega, rect, 24, raw);
  // nudged sub-rectangles overlap their neighbors, so the same zero can be
  // reported twice; also drop Newton escapees outside the requested rectangle
  std::vector<cdouble> out;
  for (auto z : raw) {
    if (z.real() < rect.left || z.real() > rect.right || z.imag() < rect.bottom ||
        z.imag() > rect.top)
      continue;
    bool dup = false;
    for (auto w : out)
      if (std::abs(z - w) < 1e-6 * (1.0 + std::abs(z))) dup = true;
    if (!dup) out.push_back(z);
  }
  std::sort(out.begin(), out.end(),
            [](cdouble a, cdouble b) { return a.real() < b.real(); });
  return out;
}

} // namespace cubic_lab
