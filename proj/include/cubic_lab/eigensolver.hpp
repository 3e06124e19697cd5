#ifndef CUBIC_LAB_EIGENSOLVER_HPP
#define CUBIC_LAB_EIGENSOLVER_HPP

#include <string>
#include <vector>

#include "cubic_lab/matrix.hpp"

namespace cubic_lab {

struct SolverReport {
  int iterations = 0;
  int deflations = 0;
  double achieved_tol = 0.0;
  bool converged = true;
  std::string message;
};

struct EigenPair {
  cdouble value;
  std::vector<cdouble> vector;  // unit 2-norm
  double residual = 0.0;        // ||M v - value v||_2
};

struct EigenvalueError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All eigenvalues of a general dense complex matrix: Householder reduction to
// upper Hessenberg, then implicitly shifted QR with Wilkinson shifts and
// standard subdiagonal deflation.  On non-convergence the partial result is
// returned with report.converged = false.
std::vector<cdouble> all_eigenvalues(const CMatrix& m, double tol, SolverReport& report);
std::vector<cdouble> all_eigenvalues(const CMatrix& m, double tol = 1e-12);

// Inverse iteration with a fixed shift on a banded matrix.  The caller must
// know (from all_eigenvalues) that exactly one eigenvalue is near the shift;
// an ambiguous shift raises EigenvalueError naming both candidates.
EigenPair eigenvector_near(const BandedComplexMatrix& m, cdouble shift, double tol,
                           const std::vector<cdouble>* spectrum = nullptr);

// Banded LU with partial pivoting for (A - shift I); solve for many rhs.
class BandedShiftedLU {
public:
  BandedShiftedLU(const BandedComplexMatrix& m, cdouble shift);
  // Solves (A - shift I) x = b in place.
  void solve(std::vector<cdouble>& b) const;
  bool near_singular() const { return near_singular_; }

private:
  std::size_t n_, kl_, ku_;
  std::vector<cdouble> ab_;   // LAPACK-style band storage with fill-in
  std::vector<int> piv_;
  bool near_singular_ = false;
};

} // namespace cubic_lab

#endif
