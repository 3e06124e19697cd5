#include "cubic_lab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "cubic_lab/eigensolver.hpp"
#include "cubic_lab/hermite.hpp"
#include "cubic_lab/nodes.hpp"
#include "cubic_lab/pade.hpp"
#include "cubic_lab/rs_series.hpp"

namespace cubic_lab {

namespace {

double basis_omega(double modulus) { return std::max(1.0, std::pow(modulus, 0.2)); }

cdouble nearest(const std::vector<cdouble>& evs, cdouble guess) {
  cdouble best = evs.at(0);
  for (auto e : evs)
    if (std::abs(e - guess) < std::abs(best - guess)) best = e;
  return best;
}

double gap_to_rest(const std::vector<cdouble>& evs, cdouble e) {
  double gap = std::numeric_limits<double>::infinity();
  for (auto v : evs) {
    double d = std::abs(v - e);
    if (d > 1e-9 * (1.0 + std::abs(e))) gap = std::min(gap, d);
  }
  return gap;
}

// Pade-summed perturbation series: a cheap global guess for E_n(beta).
cdouble series_guess(int n, cdouble beta) {
  static std::mutex mu;
  static std::map<int, PadeApproximant> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, build_pade(rs_coefficients(n, 13), 6)).first;
  return evaluate(it->second, beta);
}

std::vector<cdouble> scaled_spectrum(cdouble alpha, std::size_t N);

// For large |beta| the truncated series is useless, so seed from the scaling
// frame instead: E_n ~ beta^{1/5} e_n(alpha) with alpha = |beta|^{-2/5}, where
// e_n is an eigenvalue of -d^2/dy^2 + alpha y^2 + i y^3.  At real alpha that
// spectrum is real and sorts cleanly; the arg-dependence it drops is O(alpha),
// well inside the level spacing.
cdouble scaling_guess(const CutParameter& beta, int n) {
  auto evs = scaled_spectrum({std::pow(beta.modulus(), -0.4), 0.0}, 192);
  std::vector<double> reals;
  for (auto e : evs)
    if (std::abs(e.imag()) < 0.05 * (1.0 + e.real()) && e.real() > 0.0)
      reals.push_back(e.real());
  std::sort(reals.begin(), reals.end());
  if (static_cast<int>(reals.size()) <= n)
    throw SpectrumError("level: scaling guess window too small");
  return reals[static_cast<std::size_t>(n)] * beta.power(0.2);
}

// Dilated frame theta = -arg(beta)/6: phi(y) = psi(e^{i theta} y) solves
//   e^{-2i theta} P + e^{2i theta} X^2 + i sqrt|beta| X^3
// with the same eigenvalues, and its Hermite expansion stays as well
// conditioned near the cut as the unrotated one is on the positive axis.
double frame_theta(const CutParameter& beta) { return -beta.argument() / 6.0; }

BandedComplexMatrix framed_matrix(const CutParameter& beta, std::size_t N,
                                  double omega) {
  double th = frame_theta(beta);
  return assemble_operator(std::polar(1.0, -2.0 * th), std::polar(1.0, 2.0 * th),
                           {0.0, std::sqrt(beta.modulus())}, N, omega);
}

std::vector<cdouble> spectrum_at(const CutParameter& beta, std::size_t N, double omega) {
  return all_eigenvalues(framed_matrix(beta, N, omega).dense(), 1e-12);
}

// Label correction: walk the real-part ordering until the node count is n.
struct Identified {
  cdouble energy;
  std::vector<cdouble> vector;
  double residual = 0.0;
  bool verified = false;
};

Identified identify_by_nodes(const CutParameter& beta, int n, cdouble candidate,
                             std::size_t N, double omega,
                             const std::vector<cdouble>& evs) {
  std::vector<cdouble> ordered(evs);
  std::sort(ordered.begin(), ordered.end(),
            [](cdouble a, cdouble b) { return a.real() < b.real(); });
  auto m = framed_matrix(beta, N, omega);
  cdouble current = candidate;
  for (int tries = 0; tries < 8; ++tries) {
    auto pos = std::find_if(ordered.begin(), ordered.end(), [&](cdouble e) {
      return std::abs(e - current) < 1e-9 * (1.0 + std::abs(e));
    });
    if (pos == ordered.end())
      throw SpectrumError("level: candidate lost during node correction");
    long idx = pos - ordered.begin();
    try {
      auto pair = eigenvector_near(m, current, 1e-12, &evs);
      auto nc = count_nodes_framed(pair.vector, omega, frame_theta(beta), beta,
                                   pair.value);
      if (nc.count == n) return {pair.value, pair.vector, pair.residual, true};
      long next = idx + (n - nc.count);
      next = std::clamp<long>(next, 0, static_cast<long>(ordered.size()) - 1);
      if (next == idx)
        throw SpectrumError("level: node correction stalled on count " +
                            std::to_string(nc.count));
      current = ordered[static_cast<std::size_t>(next)];
    } catch (const NodeError&) {
      // a spurious truncation eigenvalue with no countable eigenfunction:
      // drop it and continue from its neighbor
      ordered.erase(pos);
      if (ordered.empty())
        throw SpectrumError("level: no countable eigenvalue for n = " +
                            std::to_string(n));
      current = ordered[std::min<std::size_t>(static_cast<std::size_t>(idx),
                                              ordered.size() - 1)];
    }
  }
  throw SpectrumError("level: node count failed to settle on " + std::to_string(n));
}

LevelValue direct_level(const CutParameter& beta, int n, double tol) {
  const double omega = basis_omega(beta.modulus());

  // label first: the truncated series guess degrades with |beta|, so the
  // node-count walk pins the eigenvalue before any refinement tracks it
  std::size_t N = beta.modulus() > 30.0 ? 256 : 192;
  // close to the cut the zero-free strip is razor thin and the high levels
  // need cleaner eigenvectors before their node count stabilizes
  if (beta.modulus() > 5.0 && std::abs(beta.argument()) > 2.6) N = 384;
  auto evs = spectrum_at(beta, N, omega);
  cdouble guess = beta.modulus() > 5.0 ? scaling_guess(beta, n)
                                       : series_guess(n, beta.value());
  auto id = identify_by_nodes(beta, n, nearest(evs, guess), N, omega, evs);

  cdouble prev = id.energy;
  cdouble energy = prev;
  double trunc = std::abs(energy - nearest(spectrum_at(beta, N / 2, omega), energy));
  double residual = id.residual;
  bool refined = false;
  while (trunc > tol * (1.0 + std::abs(energy))) {
    std::size_t next = N * 2;
    if (next > 768)
      throw SpectrumError("level: no convergence in N at beta = " + beta.str());
    evs = spectrum_at(beta, next, omega);
    energy = nearest(evs, prev);
    trunc = std::abs(energy - prev);
    N = next;
    prev = energy;
    refined = true;
  }
  if (refined) {
    // re-verify the label at the final basis
    auto fin = identify_by_nodes(beta, n, energy, N, omega, evs);
    if (std::abs(fin.energy - energy) > 1e-6 * (1.0 + std::abs(energy)))
      throw SpectrumError("level: label drifted during refinement at beta = " +
                          beta.str());
    energy = fin.energy;
    residual = fin.residual;
  }

  LevelValue out;
  out.n = n;
  out.beta = beta;
  out.energy = energy;
  out.basis_size = N;
  out.truncation_estimate = trunc;
  out.residual = residual;
  out.simplicity_gap = gap_to_rest(evs, energy);
  out.node_verified = true;
  return out;
}

// Spectrum of the dilated operator -d^2/dy^2 + alpha y^2 + i y^3 with
// alpha = beta^{-2/5}; its eigenvalues are beta^{-1/5} E_n(beta).
std::vector<cdouble> scaled_spectrum(cdouble alpha, std::size_t N) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, std::size_t>, std::vector<cdouble>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({alpha.real(), alpha.imag(), N});
    if (it != cache.end()) return it->second;
  }
  auto evs =
      all_eigenvalues(assemble_operator(1.0, alpha, {0.0, 1.0}, N, 2.2).dense(), 1e-12);
  std::lock_guard<std::mutex> lock(mu);
  cache[{alpha.real(), alpha.imag(), N}] = evs;
  return evs;
}

LevelValue scaled_level(const CutParameter& beta, int n, double tol) {
  // anchor with a verified label, then march the modulus in the dilated frame
  const double m_anchor = 50.0;
  auto anchor = direct_level(beta.with_modulus(m_anchor), n, std::min(tol, 1e-9));
  CutParameter b = beta.with_modulus(m_anchor);
  cdouble scaled = anchor.energy * b.power(-0.2);

  std::vector<double> moduli;
  for (double m = m_anchor; m < beta.modulus() * 0.999; m *= 4.0)
    moduli.push_back(m);
  moduli.push_back(beta.modulus());

  std::size_t N = 192;
  std::vector<cdouble> evs;
  for (double m : moduli) {
    cdouble alpha = beta.with_modulus(m).power(-0.4);
    evs = scaled_spectrum(alpha, N);
    scaled = nearest(evs, scaled);
  }
  // truncation control at the target
  cdouble alpha = beta.power(-0.4);
  double trunc;
  cdouble refined = scaled;
  while (true) {
    std::size_t next = N * 2;
    if (next > 768)
      throw SpectrumError("level: no convergence in N at beta = " + beta.str());
    evs = scaled_spectrum(alpha, next);
    cdouble better = nearest(evs, refined);
    trunc = std::abs(better - refined) * std::pow(beta.modulus(), 0.2);
    refined = better;
    N = next;
    if (trunc <= tol * (1.0 + std::abs(better) * std::pow(beta.modulus(), 0.2))) break;
  }

  LevelValue out;
  out.n = n;
  out.beta = beta;
  out.energy = refined * beta.power(0.2);
  out.basis_size = N;
  out.truncation_estimate = trunc;
  out.residual = 0.0;
  out.simplicity_gap = gap_to_rest(evs, refined) * std::pow(beta.modulus(), 0.2);
  out.node_verified = false;
  return out;
}

} // namespace

LevelValue level(const CutParameter& beta, int n, double tol) {
  if (beta.is_zero()) throw SpectrumError("level: beta = 0 is not in the cut plane");
  if (n < 0) throw SpectrumError("level: need n >= 0");
  if (tol < 1e-12) throw SpectrumError("level: tol below 1e-12");
  if (beta.modulus() <= 150.0) return direct_level(beta, n, tol);
  return scaled_level(beta, n, tol);
}

std::vector<LevelValue> continue_level(const ParameterPath& path, int n, double tol) {
  if (path.waypoints.size() < 2)
    throw SpectrumError("continue_level: need at least two waypoints");
  for (const auto& w : path.waypoints)
    if (w.is_zero()) throw SpectrumError("continue_level: waypoint at beta = 0");

  auto first = level(path.waypoints.front(), n, tol);
  std::vector<LevelValue> out{first};

  const std::size_t N = std::max<std::size_t>(first.basis_size, 144);
  struct Knot {
    double s;
    cdouble e;
  };
  std::vector<Knot> hist{{0.0, first.energy}};
  auto predict = [&](double s) -> cdouble {
    std::size_t k = hist.size();
    if (k >= 3) {  // quadratic through the last three accepted points
      const Knot &a = hist[k - 3], &b = hist[k - 2], &c = hist[k - 1];
      double la = (s - b.s) * (s - c.s) / ((a.s - b.s) * (a.s - c.s));
      double lb = (s - a.s) * (s - c.s) / ((b.s - a.s) * (b.s - c.s));
      double lc = (s - a.s) * (s - b.s) / ((c.s - a.s) * (c.s - b.s));
      return la * a.e + lb * b.e + lc * c.e;
    }
    return hist.back().e;
  };

  double s_base = 0.0;
  for (std::size_t seg = 1; seg < path.waypoints.size(); ++seg) {
    const CutParameter &w0 = path.waypoints[seg - 1], &w1 = path.waypoints[seg];
    double dlog = std::log(w1.modulus()) - std::log(w0.modulus());
    double darg = w1.argument() - w0.argument();
    double seglen = std::hypot(dlog, darg);
    auto at = [&](double t) {
      return CutParameter(std::exp(std::log(w0.modulus()) + t * dlog),
                          w0.argument() + t * darg);
    };

    double t = 0.0;
    double h = (seglen > 0.0) ? std::min(1.0, path.max_step / seglen) : 1.0;
    while (t < 1.0) {
      double tn = std::min(1.0, t + h);
      CutParameter bt = at(tn);
      auto evs = spectrum_at(bt, N, basis_omega(bt.modulus()));
      cdouble pred = predict(s_base + tn * seglen);
      cdouble e_new = nearest(evs, pred);
      double motion = std::abs(e_new - hist.back().e);
      double competitor = gap_to_rest(evs, e_new);
      if (competitor < 3.0 * motion) {
        h *= 0.5;
        if (h * seglen < 1e-3)
          throw SpectrumError(
              "continue_level: unresolved branch ambiguity between " +
              std::to_string(e_new.real()) + "+" + std::to_string(e_new.imag()) +
              "i and a competitor at distance " + std::to_string(competitor));
        continue;
      }
      hist.push_back({s_base + tn * seglen, e_new});
      t = tn;
    }
    s_base += seglen;

    // waypoint checkpoint: label re-verified by node count when feasible
    LevelValue lv;
    lv.n = n;
    lv.beta = w1;
    lv.energy = hist.back().e;
    lv.basis_size = N;
    lv.residual = 0.0;
    auto evs = spectrum_at(w1, N, basis_omega(w1.modulus()));
    lv.simplicity_gap = gap_to_rest(evs, lv.energy);
    auto half = spectrum_at(w1, N / 2, basis_omega(w1.modulus()));
    lv.truncation_estimate = std::abs(nearest(half, lv.energy) - lv.energy);
    if (w1.modulus() <= 150.0) {
      auto id = identify_by_nodes(w1, n, lv.energy, N, basis_omega(w1.modulus()), evs);
      if (std::abs(id.energy - lv.energy) > 1e-6 * (1.0 + std::abs(lv.energy)))
        throw SpectrumError("continue_level: node checkpoint disagrees at " +
                            w1.str());
      lv.residual = id.residual;
      lv.node_verified = true;
    }
    out.push_back(lv);
  }
  return out;
}

namespace {

std::vector<cdouble> rotated_spectrum(double b, double alpha, int sign,
                                      std::size_t N, double omega) {
  return all_eigenvalues(assemble_rotated(b, alpha, sign, N, omega).dense(), 1e-12);
}

} // namespace

std::vector<BoundaryValue> boundary_sweep(const std::vector<double>& targets,
                                          int sign, int n, double tol) {
  if (targets.empty()) return {};
  if (!std::is_sorted(targets.begin(), targets.end()) || targets.front() <= 0.0)
    throw SpectrumError("boundary_sweep: need sorted positive targets");
  if (sign != +1 && sign != -1) throw SpectrumError("boundary_sweep: sign must be +-1");

  // marching grid: geometric fill plus the targets themselves
  std::vector<double> grid;
  double b0 = std::min(0.05, targets.front());
  for (double b = b0; b < targets.back(); b *= 1.5) grid.push_back(b);
  grid.insert(grid.end(), targets.begin(), targets.end());
  std::sort(grid.begin(), grid.end());

  const double alphas[4] = {0.10, 0.15, 0.20, 0.25};
  std::vector<std::vector<cdouble>> at_targets(4,
                                               std::vector<cdouble>(targets.size()));

  for (int ai = 0; ai < 4; ++ai) {
    cdouble e_prev = series_guess(n, {-b0, 1e-6});  // just above the cut
    if (sign < 0) e_prev = std::conj(e_prev);
    for (double b : grid) {
      double omega = basis_omega(b);
      std::size_t N = 128;
      auto evs = rotated_spectrum(b, alphas[ai], sign, N, omega);
      cdouble e = nearest(evs, e_prev);
      // refine at targets until the truncation estimate meets tol
      auto t_it = std::lower_bound(targets.begin(), targets.end(), b);
      bool is_target = t_it != targets.end() && *t_it == b;
      if (is_target) {
        while (true) {
          std::size_t next = N * 2;
          if (next > 768)
            throw SpectrumError("boundary_sweep: no convergence at b = " +
                                std::to_string(b));
          auto fine = rotated_spectrum(b, alphas[ai], sign, next, omega);
          cdouble better = nearest(fine, e);
          double trunc = std::abs(better - e);
          e = better;
          N = next;
          if (trunc <= 0.1 * tol * (1.0 + std::abs(e))) break;
        }
        for (std::size_t ti = 0; ti < targets.size(); ++ti)
          if (targets[ti] == b) at_targets[ai][ti] = e;
      }
      e_prev = e;
    }
  }

  std::vector<BoundaryValue> out;
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    BoundaryValue bv;
    bv.b = targets[ti];
    bv.sign = sign;
    bv.n = n;
    bv.alpha_used = alphas[1];
    bv.energy = at_targets[1][ti];
    double dev = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        dev = std::max(dev, std::abs(at_targets[i][ti] - at_targets[j][ti]));
    bv.stability = dev;
    if (dev > 10.0 * tol)
      throw SpectrumError("boundary_sweep: no alpha-plateau at b = " +
                          std::to_string(bv.b) + " (spread " +
                          std::to_string(dev) + ")");
    if (sign > 0 ? bv.energy.imag() <= 0.0 : bv.energy.imag() >= 0.0)
      throw SpectrumError("boundary_sweep: Im E has the wrong sign at b = " +
                          std::to_string(bv.b));
    out.push_back(bv);
  }
  return out;
}

BoundaryValue boundary_limit(double b, int sign, int n, double tol) {
  return boundary_sweep({b}, sign, n, tol).front();
}

double limit_eigenvalue(int n, double tol) {
  if (n < 0) throw SpectrumError("limit_eigenvalue: need n >= 0");
  static std::mutex mu;
  static std::map<std::pair<int, double>, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n, tol});
    if (it != cache.end()) return it->second;
  }
  auto pick = [&](const std::vector<cdouble>& evs) {
    // the infinite-coupling spectrum is real; drop spurious complex pairs
    std::vector<double> reals;
    for (auto e : evs)
      if (std::abs(e.imag()) < 0.05 * (1.0 + e.real()) && e.real() > 0.0)
        reals.push_back(e.real());
    std::sort(reals.begin(), reals.end());
    if (static_cast<int>(reals.size()) <= n)
      throw SpectrumError("limit_eigenvalue: spectrum window too small");
    return reals[static_cast<std::size_t>(n)];
  };
  std::size_t N = 160;
  double prev = pick(scaled_spectrum({0.0, 0.0}, N));
  double value = prev;
  while (true) {
    std::size_t next = N * 2;
    if (next > 1280)
      throw SpectrumError("limit_eigenvalue: no convergence in N");
    value = pick(scaled_spectrum({0.0, 0.0}, next));
    N = next;
    if (std::abs(value - prev) <= tol * (1.0 + value)) break;
    prev = value;
  }
  std::lock_guard<std::mutex> lock(mu);
  cache[{n, tol}] = value;
  return value;
}

std::vector<double> scaling_check(const std::vector<CutParameter>& ladder, int n) {
  double ln = limit_eigenvalue(n, 1e-8);
  std::vector<double> out;
  for (const auto& beta : ladder) {
    auto lv = level(beta, n, 1e-8);
    cdouble scaled = lv.energy * beta.power(-0.2);
    out.push_back(std::abs(scaled - ln));
  }
  return out;
}

} // namespace cubic_lab
