#include "cubic_lab/model.hpp"

#include <algorithm>
#include <cmath>

#include "cubic_lab/eigensolver.hpp"

namespace cubic_lab {

std::array<cdouble, 3> cubic_roots(cdouble c3, cdouble c2, cdouble c1, cdouble c0) {
  if (c3 == cdouble(0.0))
    throw std::invalid_argument("cubic_roots: leading coefficient is zero");
  // companion matrix of the monic cubic
  cdouble a = c2 / c3, b = c1 / c3, c = c0 / c3;
  CMatrix comp(3);
  comp(0, 0) = -a; comp(0, 1) = -b; comp(0, 2) = -c;
  comp(1, 0) = 1.0;
  comp(2, 1) = 1.0;
  auto ev = all_eigenvalues(comp, 1e-14);
  std::array<cdouble, 3> roots{ev[0], ev[1], ev[2]};
  // one Newton polish each
  for (auto& r : roots) {
    cdouble f = ((c3 * r + c2) * r + c1) * r + c0;
    cdouble df = (3.0 * c3 * r + 2.0 * c2) * r + c1;
    if (std::abs(df) > 0.0) {
      cdouble step = f / df;
      if (std::isfinite(step.real()) && std::isfinite(step.imag())) r -= step;
    }
  }
  std::sort(roots.begin(), roots.end(), [](cdouble u, cdouble v) {
    return std::arg(u) < std::arg(v);
  });
  return roots;
}

TurningPoints turning_points(const Potential& p, cdouble E) {
  if (p.beta.is_zero())
    throw std::invalid_argument("turning_points: beta must be nonzero");
  const cdouble c3 = cdouble(0.0, 1.0) * p.beta.sqrt_value();
  auto roots = cubic_roots(c3, cdouble(1.0), cdouble(0.0), -E);
  TurningPoints tp;
  tp.roots = roots;
  tp.max_residual = 0.0;
  for (const auto& r : roots)
    tp.max_residual = std::max(tp.max_residual, std::abs(p.value(r) - E));
  // cluster flag: two roots closer than sqrt(eps) on the natural scale
  double scale = 0.0;
  for (const auto& r : roots) scale = std::max(scale, std::abs(r));
  tp.ill_conditioned = false;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(roots[i] - roots[j]) < 1e-7 * (1.0 + scale)) tp.ill_conditioned = true;
  return tp;
}

ScalingFrame make_frame(FrameKind kind, cdouble E, const CutParameter& beta) {
  if (beta.is_zero())
    throw std::invalid_argument("make_frame: beta must be nonzero");
  const double absE = std::abs(E);
  const double b = beta.modulus();
  const double theta = beta.argument();
  ScalingFrame f;
  f.kind = kind;
  switch (kind) {
    case FrameKind::energy_dominant: {
      if (absE == 0.0)
        throw std::invalid_argument("make_frame: zero energy in energy-dominant frame");
      f.h = std::pow(absE, -5.0 / 6.0);
      f.lambda = E * std::polar(1.0, -theta / 5.0) / absE;
      f.x_map = std::pow(absE, 1.0 / 3.0) * std::polar(1.0, -theta / 10.0);
      f.c3 = cdouble(0.0, 1.0) * std::sqrt(b);
      f.c2 = std::pow(f.h, 0.4) * std::polar(1.0, -theta / 5.0);
      break;
    }
    case FrameKind::coupling_small_a: {
      if (absE == 0.0)
        throw std::invalid_argument("make_frame: zero energy in coupling-small frame");
      f.h = 1.0 / absE;
      f.lambda = E / absE;
      f.alpha = std::sqrt(b * absE);
      f.x_map = std::sqrt(absE);
      f.c3 = cdouble(0.0, 1.0) * f.alpha;
      f.c2 = 1.0;
      break;
    }
    case FrameKind::coupling_small_b: {
      if (absE == 0.0)
        throw std::invalid_argument("make_frame: zero energy in coupling-small frame");
      f.h = std::pow(b, 1.0 / 6.0) * std::pow(absE, -5.0 / 6.0);
      f.lambda = E / absE;
      f.alpha = std::pow(b * absE, -1.0 / 3.0);
      f.x_map = std::pow(absE, 1.0 / 3.0) / beta.power(1.0 / 6.0);
      f.c3 = cdouble(0.0, 1.0);
      f.c2 = f.alpha;
      break;
    }
    case FrameKind::beta_large: {
      f.h = 1.0;
      f.lambda = (absE > 0.0) ? E / absE : cdouble(1.0);
      f.x_map = beta.power(-0.1);
      f.c3 = cdouble(0.0, 1.0);
      f.c2 = beta.power(-0.4);
      break;
    }
  }
  return f;
}

ScalingFrame limit_frame(double b, cdouble lambda) {
  ScalingFrame f;
  f.kind = FrameKind::energy_dominant;
  f.h = 0.0;
  f.lambda = lambda / std::abs(lambda);
  f.x_map = 1.0;
  f.c3 = cdouble(0.0, 1.0) * std::sqrt(b);
  f.c2 = 0.0;
  return f;
}

} // namespace cubic_lab
