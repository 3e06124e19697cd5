#include "cubic_lab/stieltjes_density.hpp"

#include <cmath>
using std::isnan;  // boost 1.74 pchip.hpp calls it unqualified
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>

#include "cubic_lab/spectrum.hpp"

namespace cubic_lab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFitLo = 10.0;
constexpr double kFitHi = 40.0;

using boost::math::quadrature::gauss_kronrod;

} // namespace

std::size_t DensityTable::gaps() const {
  std::size_t g = 0;
  for (const auto& s : samples)
    if (!s.ok) ++g;
  return g;
}

double DensityTable::t_min() const {
  for (const auto& s : samples)
    if (s.ok) return s.t;
  throw DensityError("density table has no clean samples");
}

double DensityTable::t_max() const {
  for (auto it = samples.rbegin(); it != samples.rend(); ++it)
    if (it->ok) return it->t;
  throw DensityError("density table has no clean samples");
}

std::vector<double> default_density_grid() {
  std::vector<double> grid;
  // four log decades up to the fit window, then a linear stretch across it
  for (int i = 0; i <= 49; ++i)
    grid.push_back(1e-3 * std::pow(10.0 / 1e-3, i / 50.0));
  for (double t = 10.0; t <= 40.0 + 1e-9; t += 2.0) grid.push_back(t);
  return grid;
}

DensityTable sample_density(int n, const std::vector<double>& grid, double tol) {
  if (grid.empty() || grid.front() <= 0.0 ||
      !std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw DensityError("sample_density: grid must be positive and increasing");
  if (grid.front() > 1.0001e-3 || grid.back() < 39.999)
    throw DensityError("sample_density: grid must span [1e-3, 40]");

  DensityTable table;
  table.n = n;
  for (double t : grid) table.samples.push_back({t, 0.0, 0.0, false});

  std::vector<double> bs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    bs[i] = 1.0 / grid[grid.size() - 1 - i];

  auto record = [&](const BoundaryValue& bv) {
    auto& s = table.samples[grid.size() - 1 -
                           (std::lower_bound(bs.begin(), bs.end(), bv.b) -
                            bs.begin())];
    s.rho = bv.energy.imag() / kPi;
    s.plateau = bv.stability / kPi;
    s.ok = s.rho > 0.0;
  };

  try {
    for (const auto& bv : boundary_sweep(bs, +1, n, tol)) record(bv);
  } catch (const SpectrumError&) {
    // one of the targets spoiled the sweep: salvage the rest one by one
    for (double b : bs) {
      try {
        record(boundary_limit(b, +1, n, tol));
      } catch (const SpectrumError&) {
      }
    }
  }

  table.weights.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!table.samples[i].ok) continue;
    double lo = i > 0 ? 0.5 * (grid[i] - grid[i - 1]) : 0.0;
    double hi = i + 1 < grid.size() ? 0.5 * (grid[i + 1] - grid[i]) : 0.0;
    table.weights[i] = lo + hi;
  }
  return table;
}

TunnelingFit fit_tunneling_window(const std::vector<double>& t,
                                  const std::vector<double>& rho) {
  if (t.size() != rho.size() || t.size() < 3)
    throw DensityError("tunneling fit: need at least 3 matched samples");
  // normal equations for ln rho = ln p + q ln t - A t
  std::array<std::array<double, 4>, 3> m{};
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(rho[i] > 0.0))
      throw DensityError("tunneling fit: samples must be positive");
    std::array<double, 3> row{1.0, std::log(t[i]), -t[i]};
    double y = std::log(rho[i]);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) m[a][b] += row[a] * row[b];
      m[a][3] += row[a] * y;
    }
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    std::swap(m[c], m[piv]);
    if (std::abs(m[c][c]) < 1e-14)
      throw DensityError("tunneling fit: degenerate window");
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      double f = m[r][c] / m[c][c];
      for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
    }
  }
  TunnelingFit fit;
  fit.p = std::exp(m[0][3] / m[0][0]);
  fit.q = m[1][3] / m[1][1];
  fit.A = m[2][3] / m[2][2];
  fit.window_lo = t.front();
  fit.window_hi = t.back();
  double ss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double model = std::log(fit.p) + fit.q * std::log(t[i]) - fit.A * t[i];
    ss += (model - std::log(rho[i])) * (model - std::log(rho[i]));
  }
  fit.residual = std::sqrt(ss / static_cast<double>(t.size()));
  return fit;
}

TunnelingFit tunneling_fit(const DensityTable& table) {
  std::vector<double> t, rho;
  for (const auto& s : table.samples)
    if (s.ok && s.t >= kFitLo - 1e-9 && s.t <= kFitHi + 1e-9) {
      t.push_back(s.t);
      rho.push_back(s.rho);
    }
  if (t.size() < 12)
    throw DensityError("tunneling fit: fewer than 12 clean samples in [10, 40]");
  // the o(1) corrections pollute the model near t = 10; trim the lower edge
  // until the residual certifies the three-parameter form is adequate
  auto fit = fit_tunneling_window(t, rho);
  while (fit.residual > 1.5e-4 && t.size() > 8) {
    t.erase(t.begin());
    rho.erase(rho.begin());
    fit = fit_tunneling_window(t, rho);
  }
  fit.n = table.n;
  if (fit.residual > 0.05)
    throw DensityError("tunneling fit: residual " + std::to_string(fit.residual) +
                       " on [" + std::to_string(fit.window_lo) + ", " +
                       std::to_string(fit.window_hi) + "]");
  return fit;
}

namespace {

struct BulkInterp {
  std::vector<double> lt, lr;
  std::unique_ptr<boost::math::interpolators::pchip<std::vector<double>>> spline;
  double c_small = 0.0;   // t^{-1/5} prefactor matched at the low end
  double c_spread = 0.0;  // its drift over the first few samples
};

BulkInterp build_interp(const DensityTable& table) {
  BulkInterp bi;
  for (const auto& s : table.samples)
    if (s.ok) {
      bi.lt.push_back(std::log(s.t));
      bi.lr.push_back(std::log(s.rho));
    }
  if (bi.lt.size() < 5)
    throw DensityError("density table too sparse to interpolate");
  double c0 = std::exp(bi.lr[0] + 0.2 * bi.lt[0]);
  double c2 = std::exp(bi.lr[2] + 0.2 * bi.lt[2]);
  bi.c_small = c0;
  bi.c_spread = std::abs(c2 - c0);
  auto lt = bi.lt, lr = bi.lr;
  bi.spline =
      std::make_unique<boost::math::interpolators::pchip<std::vector<double>>>(
          std::move(lt), std::move(lr));
  return bi;
}

// inf over t >= T of |1 + beta t|; positive off the cut
double kernel_floor(cdouble b, double T) {
  double tstar = -b.real() / std::norm(b);
  if (tstar > T) return std::abs(b.imag()) / std::abs(b);
  return std::abs(1.0 + b * T);
}

template <class F>
cdouble complex_quad(F f, double a, double b, double* err) {
  double er = 0.0, ei = 0.0;
  double re = gauss_kronrod<double, 31>::integrate(
      [&](double t) { return f(t).real(); }, a, b, 12, 1e-10, &er);
  double im = gauss_kronrod<double, 31>::integrate(
      [&](double t) { return f(t).imag(); }, a, b, 12, 1e-10, &ei);
  if (err) *err = er + ei;
  return {re, im};
}

} // namespace

DispersionValue dispersion_value(const DensityTable& table,
                                 const CutParameter& beta) {
  if (beta.is_zero() || beta.on_cut())
    throw DensityError("dispersion_value: beta must lie in the cut plane");
  auto bi = build_interp(table);
  auto fit = tunneling_fit(table);
  cdouble b = beta.value();
  double tmin = table.t_min(), tmax = table.t_max();

  DispersionValue out;
  double qerr = 0.0;

  // (0, tmin]: Theorem-mandated t^{-1/5} weight, tanh-sinh in each part
  boost::math::quadrature::tanh_sinh<double> ts;
  double head_err = 0.0;
  cdouble head;
  for (int part = 0; part < 2; ++part) {
    double e = 0.0;
    double v = ts.integrate(
        [&](double t) {
          cdouble k = 1.0 / (1.0 + b * t);
          return std::pow(t, -0.2) * (part == 0 ? k.real() : k.imag());
        },
        0.0, tmin, 1e-10, &e);
    (part == 0 ? head.real(bi.c_small * v) : head.imag(bi.c_small * v));
    head_err += bi.c_small * e;
  }
  qerr += head_err + std::abs(head) * bi.c_spread / bi.c_small;

  double bulk_err = 0.0;
  cdouble bulk = complex_quad(
      [&](double t) {
        return std::exp((*bi.spline)(std::log(t))) / (1.0 + b * t);
      },
      tmin, tmax, &bulk_err);
  qerr += bulk_err;

  // fitted tail with its incomplete-gamma majorant
  double majorant = fit.p * std::pow(fit.A, -(fit.q + 1.0)) *
                    boost::math::tgamma(fit.q + 1.0, fit.A * tmax) /
                    kernel_floor(b, tmax);
  if (std::abs(b) * majorant > 0.05)
    throw DensityError("dispersion_value: tail bound " +
                       std::to_string(std::abs(b) * majorant) +
                       " too large, widen the grid");
  boost::math::quadrature::exp_sinh<double> es;
  cdouble tail;
  for (int part = 0; part < 2; ++part) {
    double v = es.integrate([&](double t) {
      cdouble k = 1.0 / (1.0 + b * t);
      return fit.p * std::pow(t, fit.q) * std::exp(-fit.A * t) *
             (part == 0 ? k.real() : k.imag());
    }, tmax, std::numeric_limits<double>::infinity(), 1e-10);
    (part == 0 ? tail.real(v) : tail.imag(v));
  }
  out.tail_bound = std::abs(b) * majorant;

  double plateau = 0.0;
  for (std::size_t i = 0; i < table.samples.size(); ++i)
    if (table.samples[i].ok)
      plateau += table.weights[i] * table.samples[i].plateau /
                 std::abs(1.0 + b * table.samples[i].t);
  out.plateau_budget = std::abs(b) * plateau;
  out.quadrature_error = std::abs(b) * qerr;
  out.value = static_cast<double>(2 * table.n + 1) + b * (head + bulk + tail);
  return out;
}

double density_moment(const DensityTable& table, int k) {
  if (k < 0) throw DensityError("density_moment: order must be nonnegative");
  auto bi = build_interp(table);
  auto fit = tunneling_fit(table);
  double tmin = table.t_min(), tmax = table.t_max();
  double head =
      bi.c_small * std::pow(tmin, k + 0.8) / (static_cast<double>(k) + 0.8);
  double bulk = gauss_kronrod<double, 31>::integrate(
      [&](double t) {
        return std::pow(t, k) * std::exp((*bi.spline)(std::log(t)));
      },
      tmin, tmax, 12, 1e-10);
  double tail = fit.p * std::pow(fit.A, -(fit.q + k + 1.0)) *
                boost::math::tgamma(fit.q + k + 1.0, fit.A * tmax);
  return head + bulk + tail;
}

double small_t_slope(const DensityTable& table) {
  double cut = table.t_min() * 10.0 * (1.0 + 1e-9);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, cnt = 0.0;
  for (const auto& s : table.samples) {
    if (!s.ok || s.t > cut) continue;
    double x = std::log(s.t), y = std::log(s.rho);
    sx += x; sy += y; sxx += x * x; sxy += x * y; cnt += 1.0;
  }
  if (cnt < 3.0)
    throw DensityError("small_t_slope: fewer than 3 samples in the last decade");
  return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

double action_integral() {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(
      [](double y) { return 2.0 * std::sqrt(y * y * (1.0 - y)); }, 0.0, 1.0,
      1e-15);
}

} // namespace cubic_lab
