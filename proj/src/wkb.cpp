#include "cubic_lab/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "cubic_lab/nodes.hpp"

namespace cubic_lab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Q(y) = lambda - c3 y^3 - c2 y^2: the momentum-squared convention, under
// which the zero-carrying lines satisfy Im int sqrt(Q) = 0 and the unbounded
// ones approach the Sibuya directions (4j-3) pi/10.
struct FramePoly {
  cdouble c3, c2, lambda;
  cdouble value(cdouble y) const { return lambda - (c3 * y + c2) * y * y; }
  cdouble derivative(cdouble y) const { return -(3.0 * c3 * y + 2.0 * c2) * y; }
};

// branch of sqrt(q) closest to the running value
cdouble tracked_sqrt(cdouble q, cdouble prev) {
  cdouble s = std::sqrt(q);
  return std::abs(s - prev) <= std::abs(s + prev) ? s : -s;
}

AntiStokesLine trace_line(const FramePoly& poly,
                          const std::array<cdouble, 3>& turning,
                          std::size_t origin, double theta, double scale) {
  AntiStokesLine line;
  line.origin = origin;
  const cdouble yt = turning[origin];
  line.points.push_back(yt);

  const double r0 = 2e-4 * scale;
  const double capture = 0.02 * scale;
  const double rmax = 25.0 * scale;
  cdouble y = yt + std::polar(r0, theta);
  cdouble s = std::sqrt(poly.value(y));
  // unit tangent with Im(s dy) = 0, oriented away from the turning point
  cdouble u = std::conj(s) / std::abs(s);
  if ((u * std::conj(y - yt)).real() < 0.0) u = -u;
  cdouble action{0.0, 0.0};
  line.points.push_back(y);

  for (int step = 0; step < 60000; ++step) {
    double ds = 0.002 * scale * (1.0 + std::abs(y) / scale);
    cdouble sm = tracked_sqrt(poly.value(y + 0.5 * ds * u), s);
    cdouble um = std::conj(sm) / std::abs(sm);
    if ((um * std::conj(u)).real() < 0.0) um = -um;
    cdouble dy = ds * um;
    y += dy;
    s = tracked_sqrt(poly.value(y), sm);
    action += sm * dy;
    // pull the accumulated action back onto the line
    cdouble fix = -cdouble(0.0, 1.0) * action.imag() / s;
    y += fix;
    action += s * fix;
    s = tracked_sqrt(poly.value(y), s);
    u = std::conj(s) / std::abs(s);
    if ((u * std::conj(dy)).real() < 0.0) u = -u;
    line.points.push_back(y);
    line.max_im_action = std::max(line.max_im_action, std::abs(action.imag()));

    for (std::size_t j = 0; j < 3; ++j) {
      if (j == origin) continue;
      if (std::abs(y - turning[j]) < capture) {
        line.bounded = true;
        line.endpoint = j;
        line.points.push_back(turning[j]);
        return line;
      }
    }
    if (std::abs(y) > rmax) {
      line.direction = std::arg(y);
      double best = 1e9;
      for (int j = 1; j <= 5; ++j) {
        double dir = (4.0 * j - 3.0) * kPi / 10.0;
        double d = std::remainder(line.direction - dir, 2.0 * kPi);
        if (std::abs(d) < best) {
          best = std::abs(d);
          line.sibuya_index = j;
        }
      }
      return line;
    }
  }
  throw WkbError("trace_line: no termination within the step budget");
}

} // namespace

AntiStokesDiagram trace_diagram(const ScalingFrame& frame, cdouble lambda) {
  if (!(lambda.real() > 0.0))
    throw WkbError("trace_diagram: Re lambda must be positive");
  if (std::abs(frame.c3) == 0.0)
    throw WkbError("trace_diagram: frame has no cubic term");
  FramePoly poly{frame.c3, frame.c2, lambda};
  auto roots = cubic_roots(-frame.c3, -frame.c2, 0.0, lambda);

  AntiStokesDiagram dg;
  dg.lambda = lambda;
  std::sort(roots.begin(), roots.end(),
            [](cdouble a, cdouble b) { return std::arg(a) < std::arg(b); });
  dg.turning = roots;

  double scale = 0.0;
  for (auto r : roots) scale = std::max(scale, std::abs(r));
  for (std::size_t i = 0; i < 3; ++i) {
    // the three anti-Stokes directions of a simple turning point
    double base = std::arg(poly.derivative(dg.turning[i]));
    for (int k = 0; k < 3; ++k) {
      double theta = (2.0 / 3.0) * (k * kPi - 0.5 * base);
      dg.lines.push_back(trace_line(poly, dg.turning, i, theta, scale));
    }
  }
  return dg;
}

DensityEstimate zero_density(double b, cdouble lambda, cdouble y0, double h) {
  if (!(b > 0.0)) throw WkbError("zero_density: b must be positive");
  if (!(h > 0.0)) throw WkbError("zero_density: h must be positive");
  if (!(lambda.real() > 0.0))
    throw WkbError("zero_density: Re lambda must be positive");

  auto frame = limit_frame(b, lambda);
  cdouble yp = std::pow(b, -1.0 / 6.0) *
               std::polar(1.0, (2.0 * std::arg(lambda) - kPi) / 6.0);

  // y0 must sit on the line L+ leaving y_+ toward the other low root
  auto dg = trace_diagram(frame, lambda / std::abs(lambda));
  std::size_t ip = 0;
  for (std::size_t i = 0; i < 3; ++i)
    if (std::abs(dg.turning[i] - yp) < std::abs(dg.turning[ip] - yp)) ip = i;
  double dist = 1e300;
  for (const auto& line : dg.lines) {
    if (line.origin != ip && !(line.bounded && line.endpoint == ip)) continue;
    for (std::size_t k = 0; k + 1 < line.points.size(); ++k) {
      cdouble a = line.points[k], d = line.points[k + 1] - line.points[k];
      double t = std::clamp(((y0 - a) * std::conj(d)).real() / std::norm(d),
                            0.0, 1.0);
      dist = std::min(dist, std::abs(y0 - a - t * d));
    }
  }
  if (dist > 1e-6)
    throw WkbError("zero_density: y0 is off the anti-Stokes line by " +
                   std::to_string(dist));

  DensityEstimate est;
  est.h = h;
  est.y_plus = yp;
  est.y0 = y0;
  double r = std::abs(y0 - yp);
  est.N0 = (2.0 * std::pow(b, 1.0 / 12.0) / (kPi * std::sqrt(3.0))) *
           std::pow(r, 1.5);
  est.predicted = est.N0 / h;

  // loop integral around the segment: circle through y0 centered at y_+,
  // branch tracked continuously from y0 all the way around
  FramePoly poly{frame.c3, frame.c2, lambda};
  const int steps = 4096;
  double phi0 = std::arg(y0 - yp);
  cdouble s = std::sqrt(-poly.value(y0));  // sqrt(i sqrt(b) y^3 - lambda)
  cdouble total{0.0, 0.0};
  cdouble prev = y0;
  for (int k = 1; k <= steps; ++k) {
    cdouble y = yp + std::polar(r, phi0 + 2.0 * kPi * k / steps);
    cdouble mid = 0.5 * (prev + y);
    s = tracked_sqrt(-poly.value(mid), s);
    total += s * (y - prev);
    s = tracked_sqrt(-poly.value(y), s);
    prev = y;
  }
  est.loop_integral = std::abs(total / (2.0 * kPi));
  // next order of the local expansion sqrt(Q'(y+) s) (1 + Q'' s / (2 Q'))^{1/2}
  cdouble a = -poly.derivative(yp);      // d/dy (i sqrt(b) y^3 - lambda)
  cdouble b2 = 3.0 * frame.c3 * yp;      // half the second derivative
  cdouble d = y0 - yp;
  double refined = (2.0 / (3.0 * kPi)) * std::sqrt(std::abs(a)) *
                   std::pow(std::abs(d), 1.5) *
                   std::abs(1.0 + 0.3 * (b2 / a) * d);
  est.correction = refined - est.N0;
  return est;
}

AppendixReport appendix_bound_check(const std::vector<cdouble>& coeffs,
                                    double omega, const ScalingFrame& frame,
                                    double delta) {
  if (!(delta > 0.0) || !(frame.h > 0.0))
    throw WkbError("appendix_bound_check: need positive delta and frame h");
  AppendixReport rep;
  rep.h = frame.h;
  rep.delta = delta;

  auto roots = cubic_roots(-frame.c3, -frame.c2, 0.0, frame.lambda);
  double m = 0.0;
  for (auto r : roots) m = std::max(m, std::abs(r));
  double xm = std::abs(frame.x_map);

  // top edge kept inside the zero-free strip of the unscaled variable
  double strip = 2.0 / (3.0 * std::abs(frame.c3));
  Rectangle rect{-1.4 * m * xm, 1.4 * m * xm, -0.8 * m * xm,
                 std::min(0.12 * m * xm, 0.6 * strip)};
  auto zeros = locate_zeros(coeffs, omega, rect);
  rep.zeros_used = zeros.size();

  auto log_deriv = [&](cdouble y, double* margin) -> cdouble {
    auto v = eigenfunction_value(coeffs, omega, frame.x_map * y);
    *margin = std::abs(v.value) / std::max(v.tail_estimate, 1e-300);
    return frame.x_map * v.log_derivative();
  };
  auto cleared = [&](cdouble y) {
    for (auto z : zeros)
      if (std::abs(frame.x_map * y - z) < delta * frame.h * xm) return false;
    return true;
  };

  const int nx = 61, ny = 31;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      cdouble y(-1.3 * m + 2.6 * m * i / (nx - 1),
                -0.85 * m + 0.95 * m * j / (ny - 1));
      if (!cleared(y)) continue;
      double margin = 0.0;
      cdouble ld = log_deriv(y, &margin);
      if (margin < 1e3) continue;  // outside the certified evaluation region
      rep.cleared_max = std::max(rep.cleared_max, frame.h * std::abs(ld));
      ++rep.cleared_samples;
    }
  }
  for (auto z : zeros) {
    // probe just inside the delta h disk: the log-derivative pole shows
    for (int k = 0; k < 8; ++k) {
      cdouble y = (z + std::polar(0.3 * delta * frame.h * xm,
                                  2.0 * kPi * k / 8.0)) /
                  frame.x_map;
      double margin = 0.0;
      cdouble ld = log_deriv(y, &margin);
      if (margin < 10.0) continue;
      rep.inside_max = std::max(rep.inside_max, frame.h * std::abs(ld));
    }
  }
  if (rep.cleared_samples == 0)
    throw WkbError("appendix_bound_check: no certified samples on the window");
  return rep;
}

} // namespace cubic_lab
