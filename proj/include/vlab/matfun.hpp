#ifndef VLAB_MATFUN_HPP
#define VLAB_MATFUN_HPP

#include <functional>
#include <optional>
#include <vector>

#include "vlab/matrix.hpp"

namespace vlab {

/// Scalar function lifted to Hermitian matrices, with an optional domain
/// guard evaluated against (eigenvalue, spectral radius).
struct ScalarFun {
  std::string name;
  std::function<Complex(double)> eval;
  std::function<bool(double, double)> in_domain;  // (lambda, spectral_radius)
};

namespace fun {
ScalarFun identity();
ScalarFun exponential(double scale = 1.0);
ScalarFun logarithm();
ScalarFun inverse();        // domain lambda > 1e-12 * spectral radius
ScalarFun inverse_sqrt();   // same floor
ScalarFun sqrt_fun();
ScalarFun power(double p);  // floor applies when p < 0
}  // namespace fun

struct EigenDecomp {
  Vector eigenvalues;   // sorted by (re, im)
  Matrix vectors;       // columns
  double vector_cond;   // sigma_max/sigma_min of the eigenvector matrix
};

inline constexpr double kHermTolFactor = 1e-10;
inline constexpr double kEigFloorFactor = 1e-12;
inline constexpr double kDefaultKappaMax = 1e8;
inline constexpr double kDefaultBranchGuard = 1e-6;

double hermiticity_defect(const OperatorMatrix& a);

/// V f(Lambda) V^dagger for Hermitian A (within 1e-10 * max-abs tolerance).
/// Eigenvalues outside the function's domain are an error, reported with
/// the offending value.
OperatorMatrix matfun_hermitian(const OperatorMatrix& a, const ScalarFun& f);

/// Eigendecomposition of a general matrix, eigenvalues sorted by
/// (real, imag); vector_cond estimated from the SVD of V.
EigenDecomp eigendecompose(const OperatorMatrix& a);

/// V f(Lambda) V^{-1} on the principal branch.  Rejects near-defective
/// input (condition above kappa_max) and eigenvalues within branch_guard
/// of any listed branch point.
OperatorMatrix matfun_diagonalizable(const OperatorMatrix& a,
                                     const std::function<Complex(Complex)>& f,
                                     const std::vector<Complex>& branch_points,
                                     double branch_guard = kDefaultBranchGuard,
                                     double kappa_max = kDefaultKappaMax);

/// Finite series sum_{j<dim} L^j/j! for strictly triangular L; exact up to
/// roundoff, no truncation error.
OperatorMatrix expm_nilpotent(const OperatorMatrix& l);

/// Leading w-by-w block of the product chain, accumulated in
/// complex<long double>.  Windowed identities at the 1e-10 scale need the
/// extra precision; full-matrix products stay in double.
Matrix product_window_ld(const std::vector<const Matrix*>& chain, int w);

}  // namespace vlab

#endif
