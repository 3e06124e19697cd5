#include "cubic_lab/shooting.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace cubic_lab {

namespace {

using cdouble = std::complex<double>;

struct State {
  cdouble psi, dpsi;
};

// Integrate psi'' = (V(x) - E) psi from x0 to x1 with RK4, renormalizing to
// keep the pair in range; only the log-derivative at the endpoint is used.
cdouble log_derivative(cdouble c2, cdouble c3, cdouble E, double x0, double x1,
                       double step) {
  auto q = [&](double x) { return (c2 + c3 * x) * (x * x) - E; };
  const int nsteps = std::max(16, static_cast<int>(std::ceil(std::abs(x1 - x0) / step)));
  const double h = (x1 - x0) / nsteps;

  // WKB start: decaying direction has psi'/psi = -sqrt(q) when moving toward
  // larger x0 magnitude, i.e. sign flips with the side we come from
  cdouble root = std::sqrt(q(x0));
  if (root.real() < 0.0) root = -root;
  State s{cdouble(1.0, 0.0), (x0 > x1 ? -root : root)};

  auto rhs = [&](double x, const State& u) {
    return State{u.dpsi, q(x) * u.psi};
  };
  double x = x0;
  for (int i = 0; i < nsteps; ++i) {
    State k1 = rhs(x, s);
    State k2 = rhs(x + 0.5 * h, {s.psi + 0.5 * h * k1.psi, s.dpsi + 0.5 * h * k1.dpsi});
    State k3 = rhs(x + 0.5 * h, {s.psi + 0.5 * h * k2.psi, s.dpsi + 0.5 * h * k2.dpsi});
    State k4 = rhs(x + h, {s.psi + h * k3.psi, s.dpsi + h * k3.dpsi});
    s.psi += (h / 6.0) * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
    s.dpsi += (h / 6.0) * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);
    x += h;
    double mag = std::abs(s.psi) + std::abs(s.dpsi);
    if (mag > 1e100 || (mag < 1e-100 && mag > 0.0)) {
      s.psi /= mag;
      s.dpsi /= mag;
    }
  }
  return s.dpsi / s.psi;
}

} // namespace

ShootingResult shoot_eigenvalue(cdouble c2, cdouble c3, cdouble guess, double X,
                                double step) {
  if (!(X > 1.0) || !(step > 0.0))
    throw std::invalid_argument("shoot_eigenvalue: bad integration parameters");
  const double xm = 0.3;  // matching point off any symmetry axis
  auto mismatch = [&](cdouble E) {
    cdouble from_right = log_derivative(c2, c3, E, X, xm, step);
    cdouble from_left = log_derivative(c2, c3, E, -X, xm, step);
    return from_right - from_left;
  };

  ShootingResult out;
  cdouble e0 = guess;
  cdouble e1 = guess + 1e-3 * (1.0 + std::abs(guess));
  cdouble f0 = mismatch(e0), f1 = mismatch(e1);
  for (int it = 0; it < 60; ++it) {
    out.iterations = it + 1;
    if (f1 == f0) break;
    cdouble e2 = e1 - f1 * (e1 - e0) / (f1 - f0);
    e0 = e1;
    f0 = f1;
    e1 = e2;
    f1 = mismatch(e1);
    if (std::abs(e1 - e0) < 1e-12 * (1.0 + std::abs(e1))) {
      out.converged = true;
      break;
    }
  }
  out.energy = e1;
  out.mismatch = std::abs(f1);
  if (out.mismatch > 1e-6) out.converged = false;
  return out;
}

} // namespace cubic_lab
