#ifndef VLAB_MATRIX_HPP
#define VLAB_MATRIX_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace vlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense complex operator in a tagged basis.  Binary operations require
/// matching dimension and basis tag; mixing bases is an error, never a
/// silent coercion.
struct OperatorMatrix {
  Matrix mat;
  std::string basis;

  OperatorMatrix() = default;
  OperatorMatrix(Matrix m, std::string tag) : mat(std::move(m)), basis(std::move(tag)) {
    if (mat.rows() != mat.cols() || mat.rows() < 1)
      throw std::invalid_argument("OperatorMatrix: matrix must be square and nonempty");
  }

  int dim() const { return static_cast<int>(mat.rows()); }
};

/// Leading-block window: rows/columns 0..m-1.
struct Window {
  int m;
  explicit Window(int m_) : m(m_) {
    if (m < 1) throw std::invalid_argument("Window: size must be positive");
  }
};

void require_same_basis(const OperatorMatrix& a, const OperatorMatrix& b);
void require_window(const OperatorMatrix& a, const Window& w);

OperatorMatrix identity_like(const OperatorMatrix& a);

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(Complex s, const OperatorMatrix& a);

OperatorMatrix adjoint(const OperatorMatrix& a);

/// AB - BA.  Uses the entrywise form (d_i - d_j) B_ij when one operand is
/// exactly diagonal: algebraically identical, one rounding instead of two
/// products, which keeps ladder-relation defects at exact zero.
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// (A + A^dagger)/2; result is exactly equal to its own adjoint.
OperatorMatrix hermitian_part(const OperatorMatrix& a);
OperatorMatrix antihermitian_part(const OperatorMatrix& a);

double max_abs(const Matrix& m);

/// Max-abs entry of A - B over the leading w.m block.
double window_defect(const OperatorMatrix& a, const OperatorMatrix& b, const Window& w);
/// Relative form: divides by max(1, max-abs of B over the block).
double window_defect_rel(const OperatorMatrix& a, const OperatorMatrix& b, const Window& w);

}  // namespace vlab

#endif
