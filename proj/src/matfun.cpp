#include "vlab/matfun.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace vlab {

namespace fun {

namespace {
bool above_floor(double lam, double radius) { return lam > kEigFloorFactor * radius; }
bool anywhere(double, double) { return true; }
}  // namespace

ScalarFun identity() { return {"identity", [](double x) { return Complex(x, 0); }, anywhere}; }

ScalarFun exponential(double scale) {
  return {"exp", [scale](double x) { return Complex(std::exp(scale * x), 0); }, anywhere};
}

ScalarFun logarithm() {
  return {"log", [](double x) { return Complex(std::log(x), 0); }, above_floor};
}

ScalarFun inverse() {
  return {"inverse", [](double x) { return Complex(1.0 / x, 0); }, above_floor};
}

ScalarFun inverse_sqrt() {
  return {"inverse_sqrt", [](double x) { return Complex(1.0 / std::sqrt(x), 0); }, above_floor};
}

ScalarFun sqrt_fun() {
  return {"sqrt", [](double x) { return Complex(std::sqrt(x), 0); },
          [](double lam, double) { return lam >= 0.0; }};
}

ScalarFun power(double p) {
  if (p < 0)
    return {"power", [p](double x) { return Complex(std::pow(x, p), 0); }, above_floor};
  return {"power", [p](double x) { return Complex(std::pow(x, p), 0); },
          [](double lam, double) { return lam >= 0.0; }};
}

}  // namespace fun

double hermiticity_defect(const OperatorMatrix& a) {
  return max_abs(a.mat - a.mat.adjoint().eval());
}

OperatorMatrix matfun_hermitian(const OperatorMatrix& a, const ScalarFun& f) {
  const double scale = max_abs(a.mat);
  if (hermiticity_defect(a) > kHermTolFactor * std::max(scale, 1.0))
    throw std::invalid_argument("matfun_hermitian(" + f.name + "): input is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("matfun_hermitian: eigensolver failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  const double radius = std::max(std::abs(lam(0)), std::abs(lam(lam.size() - 1)));
  Eigen::VectorXcd flam(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (f.in_domain && !f.in_domain(lam(i), radius))
      throw std::domain_error("matfun_hermitian(" + f.name + "): eigenvalue " +
                              std::to_string(lam(i)) + " outside function domain");
    flam(i) = f.eval(lam(i));
    if (!std::isfinite(flam(i).real()) || !std::isfinite(flam(i).imag()))
      throw std::domain_error("matfun_hermitian(" + f.name + "): non-finite value at eigenvalue " +
                              std::to_string(lam(i)));
  }
  Matrix r = es.eigenvectors() * flam.asDiagonal() * es.eigenvectors().adjoint();
  return {std::move(r), a.basis};
}

EigenDecomp eigendecompose(const OperatorMatrix& a) {
  Eigen::ComplexEigenSolver<Matrix> es(a.mat, true);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");
  const Eigen::Index n = a.mat.rows();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Vector& ev = es.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (ev(i).real() != ev(j).real()) return ev(i).real() < ev(j).real();
    return ev(i).imag() < ev(j).imag();
  });
  EigenDecomp d;
  d.eigenvalues.resize(n);
  d.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.eigenvalues(i) = ev(order[i]);
    d.vectors.col(i) = es.eigenvectors().col(order[i]);
  }
  Eigen::BDCSVD<Matrix> svd(d.vectors);
  const auto& sv = svd.singularValues();
  d.vector_cond = sv(0) / sv(sv.size() - 1);
  return d;
}

OperatorMatrix matfun_diagonalizable(const OperatorMatrix& a,
                                     const std::function<Complex(Complex)>& f,
                                     const std::vector<Complex>& branch_points,
                                     double branch_guard, double kappa_max) {
  EigenDecomp d = eigendecompose(a);
  if (d.vector_cond > kappa_max)
    throw std::domain_error("matfun_diagonalizable: eigenvector condition " +
                            std::to_string(d.vector_cond) + " exceeds cap (near-defective input)");
  const Eigen::Index n = a.mat.rows();
  Vector flam(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const Complex& bp : branch_points)
      if (std::abs(d.eigenvalues(i) - bp) < branch_guard)
        throw std::domain_error("matfun_diagonalizable: eigenvalue within branch guard of branch point");
    flam(i) = f(d.eigenvalues(i));
  }
  Matrix r = d.vectors * flam.asDiagonal() * d.vectors.inverse();
  return {std::move(r), a.basis};
}

namespace {

bool strictly_triangular(const Matrix& m) {
  bool upper_ok = true, lower_ok = true;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i >= j && m(i, j) != Complex(0, 0)) upper_ok = false;
      if (i <= j && m(i, j) != Complex(0, 0)) lower_ok = false;
    }
  return upper_ok || lower_ok;
}

}  // namespace

OperatorMatrix expm_nilpotent(const OperatorMatrix& l) {
  if (!strictly_triangular(l.mat))
    throw std::invalid_argument("expm_nilpotent: input is not strictly triangular");
  const Eigen::Index n = l.mat.rows();
  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (Eigen::Index j = 1; j < n; ++j) {
    term = (term * l.mat) / static_cast<double>(j);
    if (max_abs(term) == 0.0) break;
    result += term;
  }
  return {std::move(result), l.basis};
}

Matrix product_window_ld(const std::vector<const Matrix*>& chain, int w) {
  if (chain.empty()) throw std::invalid_argument("product_window_ld: empty chain");
  using CLD = std::complex<long double>;
  using MatLD = Eigen::Matrix<CLD, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = chain.front()->rows();
  const Eigen::Index wb = std::min<Eigen::Index>(w, n);
  MatLD acc(wb, n);
  for (Eigen::Index i = 0; i < wb; ++i)
    for (Eigen::Index j = 0; j < n; ++j) acc(i, j) = CLD((*chain[0])(i, j).real(), (*chain[0])(i, j).imag());
  for (std::size_t s = 1; s < chain.size(); ++s) {
    const Matrix& f = *chain[s];
    const Eigen::Index cols = (s + 1 == chain.size()) ? wb : n;
    MatLD next = MatLD::Zero(wb, cols);
    for (Eigen::Index i = 0; i < wb; ++i)
      for (Eigen::Index kk = 0; kk < n; ++kk) {
        const CLD a = acc(i, kk);
        if (a == CLD(0, 0)) continue;
        for (Eigen::Index j = 0; j < cols; ++j)
          next(i, j) += a * CLD(f(kk, j).real(), f(kk, j).imag());
      }
    acc.swap(next);
  }
  Matrix out(wb, wb);
  for (Eigen::Index i = 0; i < wb; ++i)
    for (Eigen::Index j = 0; j < wb; ++j)
      out(i, j) = Complex(static_cast<double>(acc(i, j).real()), static_cast<double>(acc(i, j).imag()));
  return out;
}

}  // namespace vlab
