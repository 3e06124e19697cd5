#ifndef CUBIC_LAB_NODES_HPP
#define CUBIC_LAB_NODES_HPP

#include <stdexcept>
#include <vector>

#include "cubic_lab/cut_parameter.hpp"
#include "cubic_lab/hermite.hpp"

namespace cubic_lab {

struct NodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Rectangle {
  double left = 0.0;    // Re x of the left edge
  double right = 0.0;   // Re x of the right edge
  double bottom = 0.0;  // Im x of the bottom edge
  double top = 0.0;     // Im x of the top edge
};

struct NodeContour {
  Rectangle rect;
  int samples = 0;          // phase samples after adaptive refinement
  double min_margin = 0.0;  // min |psi| / tail estimate along the contour
};

struct NodeCount {
  int count = 0;
  double winding_residual = 0.0;  // distance of the raw winding to an integer
  NodeContour contour;
};

// Argument-principle winding of the truncated eigenfunction around a
// rectangle, by adaptive continuous-phase tracking.  Throws NodeError when
// the phase cannot be resolved (contour too close to a zero) or when the
// rectangle leaves the validated evaluation disk.
NodeCount winding_count(const std::vector<cdouble>& coeffs, double omega,
                        const Rectangle& rect);

// Zeros of the eigenfunction below the zero-free strip: rectangle with top
// edge inside the strip Im x < (2 / (3 sqrt|beta|)) cos(arg beta / 2) and
// extent set by the turning-point scale, with automatic radius retries.
NodeCount count_nodes(const std::vector<cdouble>& coeffs, double omega,
                      const CutParameter& beta, cdouble E);

// Same count through a dilated frame: coeffs expand phi(y) = psi(e^{i theta} y),
// the contour is still built in the x-plane and mapped by e^{-i theta}.  Near
// the cut the frame theta = -arg(beta)/6 keeps the expansion well-conditioned
// where the unrotated one degrades.
NodeCount count_nodes_framed(const std::vector<cdouble>& coeffs, double omega,
                             double theta, const CutParameter& beta, cdouble E);

struct StripReport {
  double strip_min_margin = 0.0;   // min |psi|/tail on the zero-free strip
  double sector_min_margin = 0.0;  // same on the large-|x| sector boundaries
  bool clear = false;              // both margins >= 10
};

StripReport strip_clearance(const std::vector<cdouble>& coeffs, double omega,
                            const CutParameter& beta, cdouble E);

struct PathCheckpoint {
  std::vector<cdouble> coeffs;
  double omega = 1.0;
  CutParameter beta;
  cdouble E;
};

struct InvarianceReport {
  bool invariant = false;
  int expected = 0;
  std::vector<int> counts;
  int first_offender = -1;  // checkpoint index of the first mismatch
};

InvarianceReport node_invariance(const std::vector<PathCheckpoint>& checkpoints, int n);

// Zeros inside the rectangle, located by winding subdivision plus Newton.
std::vector<cdouble> locate_zeros(const std::vector<cdouble>& coeffs, double omega,
                                  const Rectangle& rect);

} // namespace cubic_lab

#endif
