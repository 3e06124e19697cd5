#include "cubic_lab/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cubic_lab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Givens {
  double c;
  cdouble s;
};

// Rotation with G (a, b)^T = (r, 0), G = [[c, s], [-conj(s), c]], c real.
Givens make_givens(cdouble a, cdouble b) {
  double ta = std::abs(a), tb = std::abs(b);
  if (tb == 0.0) return {1.0, cdouble(0.0)};
  if (ta == 0.0) return {0.0, cdouble(1.0)};
  double r = std::hypot(ta, tb);
  return {ta / r, (a / ta) * std::conj(b) / r};
}

void hessenberg_reduce(CMatrix& a) {
  const std::size_t n = a.size();
  if (n < 3) return;
  std::vector<cdouble> v(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(a(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    cdouble x0 = a(k + 1, k);
    cdouble phase = (std::abs(x0) == 0.0) ? cdouble(1.0) : x0 / std::abs(x0);
    // v = x + phase*|x| e1, Householder H = I - tau v v^H
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a(i, k);
      if (i == k + 1) v[i] += phase * xnorm;
      vnorm2 += std::norm(v[i]);
    }
    if (vnorm2 == 0.0) continue;
    double tau = 2.0 / vnorm2;
    // A <- H A  (rows k+1..n-1, all columns)
    for (std::size_t j = k; j < n; ++j) {
      cdouble s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * a(i, j);
      s *= tau;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
    }
    // A <- A H  (all rows, columns k+1..n-1)
    for (std::size_t i = 0; i < n; ++i) {
      cdouble s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s *= tau;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

cdouble wilkinson_shift(const CMatrix& h, std::size_t hi) {
  cdouble a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
  cdouble c = h(hi, hi - 1), d = h(hi, hi);
  cdouble tr2 = 0.5 * (a + d);
  cdouble disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
  cdouble m1 = tr2 + disc, m2 = tr2 - disc;
  return (std::abs(m1 - d) < std::abs(m2 - d)) ? m1 : m2;
}

// One implicit single-shift QR sweep on the active window [lo, hi].
void qr_sweep(CMatrix& h, std::size_t lo, std::size_t hi, cdouble shift) {
  const std::size_t n = h.size();
  cdouble x = h(lo, lo) - shift;
  cdouble y = h(lo + 1, lo);
  for (std::size_t k = lo; k < hi; ++k) {
    Givens g = make_givens(x, y);
    std::size_t jstart = (k > lo) ? k - 1 : lo;
    for (std::size_t j = jstart; j < n; ++j) {
      cdouble t1 = h(k, j), t2 = h(k + 1, j);
      h(k, j) = g.c * t1 + g.s * t2;
      h(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
    }
    std::size_t iend = std::min(hi, k + 2);
    for (std::size_t i = 0; i <= iend; ++i) {
      cdouble t1 = h(i, k), t2 = h(i, k + 1);
      h(i, k) = g.c * t1 + std::conj(g.s) * t2;
      h(i, k + 1) = -g.s * t1 + g.c * t2;
    }
    if (k + 1 < hi) {
      x = h(k + 1, k);
      y = h(k + 2, k);
    }
  }
}

void solve_2x2(const CMatrix& h, std::size_t lo, cdouble& e1, cdouble& e2) {
  cdouble a = h(lo, lo), b = h(lo, lo + 1), c = h(lo + 1, lo), d = h(lo + 1, lo + 1);
  cdouble tr2 = 0.5 * (a + d);
  cdouble disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
  e1 = tr2 + disc;
  e2 = tr2 - disc;
}

} // namespace

std::vector<cdouble> all_eigenvalues(const CMatrix& m, double tol, SolverReport& report) {
  const std::size_t n = m.size();
  report = SolverReport{};
  std::vector<cdouble> eig;
  eig.reserve(n);
  if (n == 0) return eig;
  if (n == 1) {
    eig.push_back(m(0, 0));
    return eig;
  }

  CMatrix h = m;
  hessenberg_reduce(h);
  const double hnorm = std::max(h.inf_norm(), kEps);
  const double ulp = std::max(tol, kEps);

  std::size_t hi = n - 1;
  int iters_here = 0;
  const int max_per_eigen = 40;
  while (true) {
    // deflate trailing negligible subdiagonals
    while (hi > 0) {
      double thr = ulp * (std::abs(h(hi - 1, hi - 1)) + std::abs(h(hi, hi)));
      if (thr == 0.0) thr = ulp * hnorm;
      if (std::abs(h(hi, hi - 1)) <= thr) {
        h(hi, hi - 1) = 0.0;
        eig.push_back(h(hi, hi));
        ++report.deflations;
        --hi;
        iters_here = 0;
      } else {
        break;
      }
    }
    if (hi == 0) {
      eig.push_back(h(0, 0));
      break;
    }
    // active window start
    std::size_t lo = hi;
    while (lo > 0) {
      double thr = ulp * (std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo)));
      if (thr == 0.0) thr = ulp * hnorm;
      if (std::abs(h(lo, lo - 1)) <= thr) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi - 1) {
      cdouble e1, e2;
      solve_2x2(h, lo, e1, e2);
      eig.push_back(e1);
      eig.push_back(e2);
      report.deflations += 2;
      if (lo == 0) break;
      hi = lo - 1;
      iters_here = 0;
      continue;
    }
    if (iters_here >= max_per_eigen) {
      report.converged = false;
      report.message = "QR did not converge for window ending at index " + std::to_string(hi);
      for (std::size_t i = 0; i <= hi; ++i) eig.push_back(h(i, i));
      break;
    }
    cdouble shift;
    if (iters_here > 0 && iters_here % 12 == 0) {
      // exceptional shift to break symmetry-induced stagnation
      shift = h(hi, hi) + cdouble(0.75, 0.4) * std::abs(h(hi, hi - 1));
    } else {
      shift = wilkinson_shift(h, hi);
    }
    qr_sweep(h, lo, hi, shift);
    ++iters_here;
    ++report.iterations;
  }
  report.achieved_tol = ulp;
  return eig;
}

std::vector<cdouble> all_eigenvalues(const CMatrix& m, double tol) {
  SolverReport rep;
  auto e = all_eigenvalues(m, tol, rep);
  if (!rep.converged) throw EigenvalueError(rep.message);
  return e;
}

BandedShiftedLU::BandedShiftedLU(const BandedComplexMatrix& m, cdouble shift)
    : n_(m.size()), kl_(m.bandwidth()), ku_(m.bandwidth()) {
  // band storage with kl extra superdiagonals for pivoting fill-in:
  // ab(row r, col j) holds A(i, j) with r = ku_ + kl_ + i - j, r in [0, 2kl+ku]
  const std::size_t ldab = 2 * kl_ + ku_ + 1;
  ab_.assign(ldab * n_, cdouble(0.0));
  piv_.assign(n_, 0);
  auto AB = [&](std::size_t r, std::size_t j) -> cdouble& { return ab_[r * n_ + j]; };
  for (std::size_t j = 0; j < n_; ++j) {
    std::size_t ilo = (j > ku_) ? j - ku_ : 0;
    std::size_t ihi = std::min(n_ - 1, j + kl_);
    for (std::size_t i = ilo; i <= ihi; ++i) {
      cdouble v = m.entry(i, j);
      if (i == j) v -= shift;
      AB(ku_ + kl_ + i - j, j) = v;
    }
  }
  // factorize (gbtrf-style)
  const double scale = std::max(m.inf_norm() + std::abs(shift), kEps);
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t pmax = std::min(kl_, n_ - 1 - k);
    std::size_t p = 0;
    double best = std::abs(AB(ku_ + kl_, k));
    for (std::size_t i = 1; i <= pmax; ++i) {
      double v = std::abs(AB(ku_ + kl_ + i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    piv_[k] = static_cast<int>(k + p);
    if (best <= 1e3 * kEps * scale) near_singular_ = true;
    if (p != 0) {
      std::size_t jmax = std::min(n_ - 1, k + ku_ + kl_);
      for (std::size_t j = k; j <= jmax; ++j) {
        std::swap(AB(ku_ + kl_ + k - j, j), AB(ku_ + kl_ + k + p - j, j));
      }
    }
    cdouble pivot = AB(ku_ + kl_, k);
    if (pivot == cdouble(0.0)) pivot = cdouble(kEps * scale);
    for (std::size_t i = 1; i <= pmax; ++i) {
      cdouble l = AB(ku_ + kl_ + i, k) / pivot;
      AB(ku_ + kl_ + i, k) = l;
      std::size_t jmax = std::min(n_ - 1, k + ku_ + kl_);
      for (std::size_t j = k + 1; j <= jmax; ++j)
        AB(ku_ + kl_ + k + i - j, j) -= l * AB(ku_ + kl_ + k - j, j);
    }
  }
}

void BandedShiftedLU::solve(std::vector<cdouble>& b) const {
  const auto AB = [&](std::size_t r, std::size_t j) -> const cdouble& {
    return ab_[r * n_ + j];
  };
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t p = static_cast<std::size_t>(piv_[k]);
    if (p != k) std::swap(b[k], b[p]);
    std::size_t imax = std::min(kl_, n_ - 1 - k);
    for (std::size_t i = 1; i <= imax; ++i) b[k + i] -= AB(ku_ + kl_ + i, k) * b[k];
  }
  for (std::size_t kk = n_; kk-- > 0;) {
    std::size_t jmax = std::min(n_ - 1, kk + ku_ + kl_);
    for (std::size_t j = kk + 1; j <= jmax; ++j) b[kk] -= AB(ku_ + kl_ + kk - j, j) * b[j];
    b[kk] /= AB(ku_ + kl_, kk);
  }
}

EigenPair eigenvector_near(const BandedComplexMatrix& m, cdouble shift, double tol,
                           const std::vector<cdouble>* spectrum) {
  const std::size_t n = m.size();
  const double scale = std::max(m.inf_norm(), kEps);
  if (spectrum && spectrum->size() >= 2) {
    double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
    cdouble l1 = 0, l2 = 0;
    for (const auto& l : *spectrum) {
      double d = std::abs(l - shift);
      if (d < d1) {
        d2 = d1; l2 = l1;
        d1 = d; l1 = l;
      } else if (d < d2) {
        d2 = d; l2 = l;
      }
    }
    if (d2 - d1 <= 0.1 * d2 && d2 > 0.0) {
      throw EigenvalueError(
          "eigenvector_near: ambiguous shift between eigenvalues (" +
          std::to_string(l1.real()) + "," + std::to_string(l1.imag()) + ") and (" +
          std::to_string(l2.real()) + "," + std::to_string(l2.imag()) + ")");
    }
  }

  cdouble s = shift;
  for (int attempt = 0; attempt < 3; ++attempt) {
    BandedShiftedLU lu(m, s);
    // deterministic pseudo-random start vector
    std::vector<cdouble> v(n);
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    for (auto& x : v) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      x = cdouble(static_cast<double>(state >> 33) / 4294967296.0 - 0.25,
                  static_cast<double>((state >> 11) & 0x3fffff) / 4194304.0 - 0.5);
    }
    std::vector<cdouble> av(n);
    EigenPair best;
    best.residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 50; ++it) {
      lu.solve(v);
      double nrm = 0.0;
      for (const auto& x : v) nrm += std::norm(x);
      nrm = std::sqrt(nrm);
      if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
      for (auto& x : v) x /= nrm;
      // Rayleigh quotient and residual
      m.apply_shifted(v, cdouble(0.0), av);
      cdouble lam = 0.0;
      for (std::size_t i = 0; i < n; ++i) lam += std::conj(v[i]) * av[i];
      double res = 0.0;
      for (std::size_t i = 0; i < n; ++i) res += std::norm(av[i] - lam * v[i]);
      res = std::sqrt(res);
      if (res < best.residual) best = EigenPair{lam, v, res};
      if (res <= tol * scale) return best;
    }
    if (std::isfinite(best.residual) && best.residual <= 1e4 * tol * scale) return best;
    // perturbed-shift fallback against exactly singular factorization
    s = shift + cdouble(1e-10, 3e-11) * scale;
  }
  throw EigenvalueError("eigenvector_near: inverse iteration failed to converge");
}

} // namespace cubic_lab
