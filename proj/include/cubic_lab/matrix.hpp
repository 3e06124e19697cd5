#ifndef CUBIC_LAB_MATRIX_HPP
#define CUBIC_LAB_MATRIX_HPP

#include <cassert>
#include <complex>
#include <cstddef>
#include <vector>

#include "cubic_lab/cut_parameter.hpp"

namespace cubic_lab {

// Dense square complex matrix, row-major.
class CMatrix {
public:
  CMatrix() : n_(0) {}
  explicit CMatrix(std::size_t n) : n_(n), a_(n * n) {}

  std::size_t size() const { return n_; }
  cdouble& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const cdouble& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  cdouble* data() { return a_.data(); }
  const cdouble* data() const { return a_.data(); }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double inf_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j) s += std::abs((*this)(i, j));
      if (s > best) best = s;
    }
    return best;
  }

  cdouble trace() const {
    cdouble t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

private:
  std::size_t n_;
  std::vector<cdouble> a_;
};

// Complex-symmetric band matrix stored by diagonal.  diag(d) holds the
// entries (i, i+d) for d = 0..bandwidth; symmetry supplies the lower half.
class BandedComplexMatrix {
public:
  BandedComplexMatrix(std::size_t n, std::size_t bandwidth)
      : n_(n), bw_(bandwidth), diags_(bandwidth + 1) {
    for (std::size_t d = 0; d <= bw_; ++d) diags_[d].assign(n_ - d, cdouble(0.0));
  }

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return bw_; }

  cdouble& diag(std::size_t d, std::size_t i) { return diags_[d][i]; }
  const cdouble& diag(std::size_t d, std::size_t i) const { return diags_[d][i]; }

  cdouble entry(std::size_t i, std::size_t j) const {
    std::size_t lo = i < j ? i : j, hi = i < j ? j : i;
    std::size_t d = hi - lo;
    if (d > bw_) return cdouble(0.0);
    return diags_[d][lo];
  }

  CMatrix dense() const {
    CMatrix m(n_);
    for (std::size_t d = 0; d <= bw_; ++d)
      for (std::size_t i = 0; i + d < n_; ++i) {
        m(i, i + d) = diags_[d][i];
        m(i + d, i) = diags_[d][i];
      }
    return m;
  }

  // y = (A - shift I) x
  void apply_shifted(const std::vector<cdouble>& x, cdouble shift,
                     std::vector<cdouble>& y) const {
    assert(x.size() == n_);
    y.assign(n_, cdouble(0.0));
    for (std::size_t i = 0; i < n_; ++i) {
      cdouble s = (diags_[0][i] - shift) * x[i];
      for (std::size_t d = 1; d <= bw_; ++d) {
        if (i + d < n_) s += diags_[d][i] * x[i + d];
        if (i >= d) s += diags_[d][i - d] * x[i - d];
      }
      y[i] = s;
    }
  }

  double inf_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double s = std::abs(diags_[0][i]);
      for (std::size_t d = 1; d <= bw_; ++d) {
        if (i + d < n_) s += std::abs(diags_[d][i]);
        if (i >= d) s += std::abs(diags_[d][i - d]);
      }
      if (s > best) best = s;
    }
    return best;
  }

private:
  std::size_t n_, bw_;
  std::vector<std::vector<cdouble>> diags_;
};

} // namespace cubic_lab

#endif
