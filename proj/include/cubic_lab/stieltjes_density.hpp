#ifndef CUBIC_LAB_STIELTJES_DENSITY_HPP
#define CUBIC_LAB_STIELTJES_DENSITY_HPP

#include <stdexcept>
#include <vector>

#include "cubic_lab/cut_parameter.hpp"

namespace cubic_lab {

struct DensityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DensitySample {
  double t = 0.0;
  double rho = 0.0;      // (1/pi) Im E_n^+(-1/t)
  double plateau = 0.0;  // alpha-ladder spread of the boundary value
  bool ok = false;       // false marks a gap (boundary limit failed)
};

struct DensityTable {
  int n = 0;
  std::vector<DensitySample> samples;  // t strictly increasing
  std::vector<double> weights;         // trapezoid weights, 0 at gaps
  std::size_t gaps() const;
  double t_min() const;
  double t_max() const;
};

// Log grid over [1e-3, 40] with a denser linear stretch on the fit
// window [10, 40].
std::vector<double> default_density_grid();

// One marching boundary sweep per table; samples that fail to converge
// are flagged as gaps instead of aborting the table.
DensityTable sample_density(int n, const std::vector<double>& grid,
                            double tol = 1e-9);

struct TunnelingFit {
  int n = 0;
  double p = 0.0;      // prefactor
  double q = 0.0;      // power correction
  double A = 0.0;      // exponential slope, target 8/15
  double window_lo = 0.0;
  double window_hi = 0.0;
  double residual = 0.0;  // rms of ln rho over the window
};

// Least squares of ln rho = ln p + q ln t - A t on t in [10, 40];
// needs at least 12 clean samples there.
TunnelingFit tunneling_fit(const DensityTable& table);

// Same fit on raw arrays (synthetic-data self checks).
TunnelingFit fit_tunneling_window(const std::vector<double>& t,
                                  const std::vector<double>& rho);

struct DispersionValue {
  cdouble value{0.0, 0.0};   // E_n(0) + beta * integral
  double quadrature_error = 0.0;
  double tail_bound = 0.0;
  double plateau_budget = 0.0;
  double budget() const {
    return quadrature_error + tail_bound + plateau_budget;
  }
};

// E_n(0) + beta * int rho(t)/(1 + beta t) dt with the endpoint treatments
// the density dictates: t^{-1/5} weight on (0, t_min], interpolated bulk,
// fitted exponential tail beyond t_max bounded by an incomplete gamma.
DispersionValue dispersion_value(const DensityTable& table,
                                 const CutParameter& beta);

// int t^k rho(t) dt with the same endpoint treatments; matches the
// perturbative |e_{n,k+1}| by the moment identity.
double density_moment(const DensityTable& table, int k);

// Log-log slope of rho over the smallest decade of the grid (target -1/5).
double small_t_slope(const DensityTable& table);

// 2 int_0^1 sqrt(y^2 - y^3) dy = 8/15, the tunneling action.
double action_integral();

} // namespace cubic_lab

#endif
