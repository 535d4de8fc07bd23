#include "vlab/matrix.hpp"

namespace vlab {

void require_same_basis(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("operator dimension mismatch: " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
  if (a.basis != b.basis)
    throw std::invalid_argument("basis tag mismatch: '" + a.basis + "' vs '" + b.basis + "'");
}

void require_window(const OperatorMatrix& a, const Window& w) {
  if (w.m > a.dim())
    throw std::invalid_argument("window " + std::to_string(w.m) + " exceeds dimension " +
                                std::to_string(a.dim()));
}

OperatorMatrix identity_like(const OperatorMatrix& a) {
  return {Matrix::Identity(a.dim(), a.dim()), a.basis};
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a, b);
  return {a.mat + b.mat, a.basis};
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a, b);
  return {a.mat - b.mat, a.basis};
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a, b);
  return {a.mat * b.mat, a.basis};
}

OperatorMatrix operator*(Complex s, const OperatorMatrix& a) { return {s * a.mat, a.basis}; }

OperatorMatrix adjoint(const OperatorMatrix& a) { return {a.mat.adjoint(), a.basis}; }

namespace {

bool exactly_diagonal(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

}  // namespace

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a, b);
  const Eigen::Index n = a.mat.rows();
  if (exactly_diagonal(a.mat)) {
    Matrix r(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) r(i, j) = (a.mat(i, i) - a.mat(j, j)) * b.mat(i, j);
    return {std::move(r), a.basis};
  }
  if (exactly_diagonal(b.mat)) {
    Matrix r(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) r(i, j) = a.mat(i, j) * (b.mat(j, j) - b.mat(i, i));
    return {std::move(r), a.basis};
  }
  return {a.mat * b.mat - b.mat * a.mat, a.basis};
}

OperatorMatrix hermitian_part(const OperatorMatrix& a) {
  Matrix h = 0.5 * (a.mat + a.mat.adjoint());
  // enforce exact self-adjointness of the result
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    h(i, i) = Complex(h(i, i).real(), 0.0);
    for (Eigen::Index j = 0; j < i; ++j) h(i, j) = std::conj(h(j, i));
  }
  return {std::move(h), a.basis};
}

OperatorMatrix antihermitian_part(const OperatorMatrix& a) {
  return {0.5 * (a.mat - a.mat.adjoint()), a.basis};
}

double max_abs(const Matrix& m) {
  double v = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) v = std::max(v, std::abs(m(i, j)));
  return v;
}

double window_defect(const OperatorMatrix& a, const OperatorMatrix& b, const Window& w) {
  require_same_basis(a, b);
  require_window(a, w);
  return max_abs(a.mat.topLeftCorner(w.m, w.m) - b.mat.topLeftCorner(w.m, w.m));
}

double window_defect_rel(const OperatorMatrix& a, const OperatorMatrix& b, const Window& w) {
  const double num = window_defect(a, b, w);
  const double den = std::max(1.0, max_abs(b.mat.topLeftCorner(w.m, w.m)));
  return num / den;
}

}  // namespace vlab
