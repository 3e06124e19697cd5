#ifndef CUBIC_LAB_WKB_HPP
#define CUBIC_LAB_WKB_HPP

#include <array>
#include <stdexcept>
#include <vector>

#include "cubic_lab/model.hpp"

namespace cubic_lab {

struct WkbError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AntiStokesLine {
  std::size_t origin = 0;          // index of the turning point it leaves
  std::vector<cdouble> points;     // trace, turning point first
  bool bounded = false;            // ends at another turning point
  std::size_t endpoint = 0;        // its index when bounded
  double direction = 0.0;          // asymptotic arg y when unbounded
  int sibuya_index = 0;            // j of the matched direction (4j-3)pi/10
  double max_im_action = 0.0;      // drift of Im int sqrt(Q) along the trace
};

struct AntiStokesDiagram {
  cdouble lambda;
  std::array<cdouble, 3> turning;    // y_+, y_-, y~ (argument-sorted)
  std::vector<AntiStokesLine> lines; // three per turning point
};

// Anti-Stokes geometry of the frame polynomial Q(y) = lambda - c3 y^3
// - c2 y^2: predictor-corrector traces of Im int sqrt(Q) dy = 0 with the
// branch of sqrt(Q) tracked by continuity.
AntiStokesDiagram trace_diagram(const ScalingFrame& frame, cdouble lambda);

struct DensityEstimate {
  double N0 = 0.0;          // closed-form density factor
  double h = 0.0;
  double predicted = 0.0;   // N0 / h
  cdouble y_plus;           // turning point anchoring the segment
  cdouble y0;               // sampled endpoint on the line
  double loop_integral = 0.0;  // |(1/2 pi i) oint sqrt(Q)| cross-check
  double correction = 0.0;     // loop integral minus closed form
};

// Zero-density estimate along the anti-Stokes line leaving y_+ of the
// b-large limit polynomial i sqrt(b) y^3 - lambda.
DensityEstimate zero_density(double b, cdouble lambda, cdouble y0, double h);

struct AppendixReport {
  double h = 0.0;
  double delta = 0.0;
  double cleared_max = 0.0;    // max of h |phi'/phi| off the delta h disks
  double inside_max = 0.0;     // same probed inside the disks (sanity)
  std::size_t cleared_samples = 0;
  std::size_t zeros_used = 0;
};

// Empirical check of the h |phi'/phi| = O(1) bound away from zeros:
// samples the truncated eigenfunction on the frame window, excluding
// delta h disks around its located zeros.
AppendixReport appendix_bound_check(const std::vector<cdouble>& coeffs,
                                    double omega, const ScalingFrame& frame,
                                    double delta);

} // namespace cubic_lab

#endif
