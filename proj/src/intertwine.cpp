#include "vlab/intertwine.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace vlab {

namespace {

std::string overlap_tag(double k_row, double k_col, int n) {
  std::ostringstream os;
  os << "overlap:rows=k" << k_row << ":cols=k" << k_col << ":N=" << n;
  return os.str();
}

// (a)_p / p! table, p = 0..pmax
std::vector<double> poch_over_fact(double a, int pmax) {
  std::vector<double> v(pmax + 1);
  v[0] = 1.0;
  for (int p = 0; p < pmax; ++p) v[p + 1] = v[p] * (a + p) / (p + 1.0);
  return v;
}

// Single-sum closed form of the Laguerre cross-overlap integral; the naive
// double expansion cancels catastrophically beyond m,n ~ 15, this grouping
// has polynomially bounded terms.
Matrix overlap_gamma_sum(double kr, double kc, int n) {
  const double g = kr + kc;
  const double d = kc - kr;
  if (d == 0.0) return Matrix::Identity(n, n);  // same orthonormal basis
  Matrix s(n, n);
  std::vector<double> lgr(n), lgc(n), lfac(n);
  for (int j = 0; j < n; ++j) {
    lgr[j] = std::lgamma(j + 2.0 * kr);
    lgc[j] = std::lgamma(j + 2.0 * kc);
    lfac[j] = std::lgamma(j + 1.0);
  }
  const double lgg = std::lgamma(g);
  const int pmax = n - 1;
  std::vector<double> bm = poch_over_fact(-d, pmax);
  std::vector<double> cn = poch_over_fact(d, pmax);
  std::vector<double> ar = poch_over_fact(g, pmax);
  for (int m = 0; m < n; ++m) {
    for (int nn = 0; nn < n; ++nn) {
      const double lp = 0.5 * (std::log(2.0) + lfac[m] - lgr[m]) +
                        0.5 * (std::log(2.0) + lfac[nn] - lgc[nn]) - std::log(2.0) + lgg;
      double acc = 0.0;
      for (int r = std::min(m, nn); r >= 0; --r) acc += ar[r] * bm[m - r] * cn[nn - r];
      double v = std::exp(lp) * acc;
      if ((m + nn) % 2 == 1) v = -v;
      s(m, nn) = v;
    }
  }
  return s;
}

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd log_weights;
};

// Generalized Gauss-Laguerre via Golub-Welsch nodes; weights from the
// Christoffel identity w_q = 1/sum_j p_j(t_q)^2 with an exponent-ledger
// recurrence (eigenvector first components underflow for tail nodes).
QuadratureRule gauss_laguerre(double alpha, int order) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(order, order);
  for (int i = 0; i < order; ++i) jac(i, i) = 2.0 * i + alpha + 1.0;
  for (int i = 1; i < order; ++i) {
    const double b = std::sqrt(i * (i + alpha));
    jac(i, i - 1) = jac(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac, Eigen::EigenvaluesOnly);
  QuadratureRule r;
  r.nodes = es.eigenvalues();
  r.log_weights.resize(order);
  const double l0 = -0.5 * std::lgamma(alpha + 1.0);
  for (int q = 0; q < order; ++q) {
    const double t = r.nodes(q);
    double pm = 0.0, pc = 1.0;       // scaled; true p_0 = e^{l0}
    double loge = 2.0 * l0;          // chi = chi_m * e^{loge}
    double chi = 1.0;
    for (int j = 0; j + 1 < order; ++j) {
      const double bj = j > 0 ? std::sqrt(j * (j + alpha)) : 0.0;
      const double bj1 = std::sqrt((j + 1.0) * (j + 1.0 + alpha));
      const double pn = ((t - (2.0 * j + alpha + 1.0)) * pc - bj * pm) / bj1;
      pm = pc;
      pc = pn;
      const double mag = std::max(std::abs(pm), std::abs(pc));
      if (mag > 1e150) {
        pm /= mag;
        pc /= mag;
        chi /= mag * mag;
        loge += 2.0 * std::log(mag);
      }
      chi += pc * pc;
    }
    r.log_weights(q) = -(std::log(chi) + loge);
  }
  return r;
}

// Rows m = 0..nrows-1 of u_m(q) = psi-basis polynomial * sqrt(w_q).  The
// Jacobi recurrence generates positive-leading orthonormal polynomials,
// which are exactly the staggered psi-basis functions.
Eigen::MatrixXd family_values(double kf, int nrows, const QuadratureRule& rule) {
  const double af = 2.0 * kf - 1.0;
  const int q = static_cast<int>(rule.nodes.size());
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(nrows, q);
  for (int iq = 0; iq < q; ++iq) {
    const double t = rule.nodes(iq);
    const double base = 0.5 * rule.log_weights(iq) - 0.5 * std::lgamma(af + 1.0);
    double pm = 0.0, pc = 1.0, loge = base;
    u(0, iq) = base < 700.0 ? std::exp(base) : throw std::overflow_error("family_values: scale overflow");
    for (int j = 0; j + 1 < nrows; ++j) {
      const double bj = j > 0 ? std::sqrt(j * (j + af)) : 0.0;
      const double bj1 = std::sqrt((j + 1.0) * (j + 1.0 + af));
      const double pn = ((t - (2.0 * j + af + 1.0)) * pc - bj * pm) / bj1;
      pm = pc;
      pc = pn;
      const double mag = std::max(std::abs(pm), std::abs(pc));
      if (mag > 1e150) {
        pm /= mag;
        pc /= mag;
        loge += std::log(mag);
      }
      if (pc == 0.0) {
        u(j + 1, iq) = 0.0;
        continue;
      }
      const double lv = loge + std::log(std::abs(pc));
      u(j + 1, iq) = lv < 700.0 ? std::copysign(std::exp(lv), pc) : throw std::overflow_error("family_values: value overflow");
    }
  }
  return u;
}

Matrix overlap_quadrature(double kr, double kc, int n) {
  const double alpha = kr + kc - 1.0;
  const int order = 2 * n + 32;
  auto eval = [&](int ord) {
    QuadratureRule rule = gauss_laguerre(alpha, ord);
    Eigen::MatrixXd ur = family_values(kr, n, rule);
    Eigen::MatrixXd uc = family_values(kc, n, rule);
    return Eigen::MatrixXd(ur * uc.transpose());
  };
  Eigen::MatrixXd s1 = eval(order);
  Eigen::MatrixXd s2 = eval(2 * order);
  const double disc = (s1 - s2).cwiseAbs().maxCoeff();
  if (disc > 1e-10)
    throw std::runtime_error("overlap_matrix(quadrature): order-doubling discrepancy " +
                             std::to_string(disc) + " exceeds 1e-10 (order insufficient)");
  return s2.cast<Complex>();
}

}  // namespace

OverlapMatrix overlap_matrix(double k_row, double k_col, int n, OverlapMethod method) {
  if (!(k_row > 0) || !(k_col > 0)) throw std::invalid_argument("overlap_matrix: indices must be positive");
  if (n < 4) throw std::invalid_argument("overlap_matrix: N >= 4 required");
  Matrix s = method == OverlapMethod::gamma_sum ? overlap_gamma_sum(k_row, k_col, n)
                                                : overlap_quadrature(k_row, k_col, n);
  return {{std::move(s), overlap_tag(k_row, k_col, n)}, method, k_row, k_col};
}

double overlap_s00_exact(double k_row, double k_col) {
  return std::exp(std::lgamma(k_row + k_col) -
                  0.5 * (std::lgamma(2.0 * k_row) + std::lgamma(2.0 * k_col)));
}

namespace {

Matrix phase_diagonal(double kappa, int n, double theta) {
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) p(i, i) = std::exp(Complex(0, theta * (i + kappa)));
  return p;
}

std::string intertwiner_tag(const char* kind, double k, double k0, int n) {
  std::ostringstream os;
  os << kind << ":k=" << k << ":k0=" << k0 << ":N=" << n;
  return os.str();
}

}  // namespace

Intertwiner unitary_U(double k, double k0, int n) {
  OverlapMatrix s = overlap_matrix(k, k0, n, OverlapMethod::gamma_sum);
  Matrix u = phase_diagonal(k, n, -M_PI) * s.S.mat * phase_diagonal(k0, n, M_PI);
  return {{std::move(u), intertwiner_tag("U", k, k0, n)}, IntertwinerKind::u_phase, k, k0};
}

double unitarity_defect(const Intertwiner& u, const Window& w) {
  const int n = u.matrix.dim();
  OperatorMatrix prod{u.matrix.mat.adjoint() * u.matrix.mat, u.matrix.basis};
  OperatorMatrix eye{Matrix::Identity(n, n), u.matrix.basis};
  return window_defect(prod, eye, w);
}

Intertwiner intertwiner_U1(double k, double k0, int n) {
  if (k == k0)  // S is the identity and the nilpotent exponentials cancel exactly
    return {{Matrix::Identity(n, n), intertwiner_tag("U1", k, k0, n)},
            IntertwinerKind::u1_nilpotent, k, k0};
  Sector sa = sector_from_k(k, n), sb = sector_from_k(k0, n);
  GeneratorSet ga = generators(sa), gb = generators(sb);
  OverlapMatrix s = overlap_matrix(k, k0, n, OverlapMethod::gamma_sum);
  OperatorMatrix ea = expm_nilpotent({-ga.Kminus.mat, s.S.basis});
  OperatorMatrix eb = expm_nilpotent({gb.Kminus.mat, s.S.basis});
  Matrix u1 = ea.mat * s.S.mat * eb.mat;
  return {{std::move(u1), intertwiner_tag("U1", k, k0, n)}, IntertwinerKind::u1_nilpotent, k, k0};
}

namespace {

// truncated-SVD pseudo-inverse with condition cap 1e8; full inversion of S
// is meaningless in the tail columns
Matrix pinv_capped(const Matrix& m, double cap = 1e8) {
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cut = sv(0) / cap;
  Eigen::VectorXd inv(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) inv(i) = sv(i) > cut ? 1.0 / sv(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Matrix u1_inverse(const Intertwiner& u, int n) {
  if (u.k == u.k0) return Matrix::Identity(n, n);
  Sector sa = sector_from_k(u.k, n), sb = sector_from_k(u.k0, n);
  GeneratorSet ga = generators(sa), gb = generators(sb);
  OverlapMatrix s = overlap_matrix(u.k, u.k0, n, OverlapMethod::gamma_sum);
  const std::string tag = u.matrix.basis;
  Matrix eb_inv = expm_nilpotent({-gb.Kminus.mat, tag}).mat;
  Matrix ea_inv = expm_nilpotent({ga.Kminus.mat, tag}).mat;
  return eb_inv * pinv_capped(s.S.mat) * ea_inv;
}

}  // namespace

double transport_defect(const Intertwiner& u, const OperatorMatrix& a_from,
                        const OperatorMatrix& a_to, const Window& w) {
  const int n = u.matrix.dim();
  if (a_from.dim() != n || a_to.dim() != n)
    throw std::invalid_argument("transport_defect: dimension mismatch with intertwiner");
  Matrix moved;
  if (u.kind == IntertwinerKind::u_phase) {
    moved = u.matrix.mat * a_from.mat * u.matrix.mat.adjoint();
  } else {
    moved = u.matrix.mat * a_from.mat * u1_inverse(u, n);
  }
  return max_abs(moved.topLeftCorner(w.m, w.m) - a_to.mat.topLeftCorner(w.m, w.m));
}

TcsResult t_cs(double k, double k0, double omega, int n, const Window& w) {
  if (std::abs(k0 - 0.75) > 1e-12)
    throw std::invalid_argument("t_cs: the reference sector is k0 = 3/4 (g = 0)");
  if (!(omega > 0)) throw std::invalid_argument("t_cs: omega must be positive");
  Sector s0 = sector_from_k(k0, n);
  THarmonicResult th = t_harmonic(s0, omega, w);
  Intertwiner u1 = intertwiner_U1(k, k0, n);
  Matrix tcs = u1.matrix.mat * th.th.matrix.mat * u1_inverse(u1, n);

  Sector sk = sector_from_k(k, n);
  GeneratorSet g = generators(sk);
  Matrix hcs = 2.0 * omega * g.K3.mat;
  Matrix defect = hcs * tcs - tcs * hcs - Complex(0, 1) * Matrix::Identity(n, n);

  TcsResult r;
  r.commutator_defect_abs = max_abs(defect.topLeftCorner(w.m, w.m));
  r.window_scale = max_abs(tcs.topLeftCorner(w.m, w.m));
  r.tcs = {{std::move(tcs), sk.basis_tag()}, TimeOperatorKind::t_cs,
           {{"omega", omega}, {"k", k}, {"k0", k0}}};
  return r;
}

FockLine fock_line(int n) {
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("fock_line: N must be even and >= 8 (odd N makes truncated p singular)");
  std::ostringstream os;
  os << "fockline:N=" << n;
  const std::string tag = os.str();
  Matrix x = Matrix::Zero(n, n), p = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    const double a = std::sqrt((i + 1.0) / 2.0);
    x(i, i + 1) = x(i + 1, i) = a;
    p(i + 1, i) = Complex(0, a);
    p(i, i + 1) = Complex(0, -a);
  }
  OperatorMatrix xo{std::move(x), tag}, po{std::move(p), tag};
  OperatorMatrix h0{(po.mat * po.mat * 0.5).eval(), tag};
  OperatorMatrix d{(-0.25 * (xo.mat * po.mat + po.mat * xo.mat)).eval(), tag};
  OperatorMatrix kk{(xo.mat * xo.mat * 0.5).eval(), tag};
  return {n, std::move(xo), std::move(po), std::move(h0), std::move(d), std::move(kk)};
}

T0FormsResult t0_forms_agreement(const FockLine& f, double p_min, const Window& w) {
  if (!(p_min > 0)) throw std::invalid_argument("t0_forms_agreement: p_min must be positive");
  const int n = f.N;
  OperatorMatrix isq = matfun_hermitian(f.H0, fun::inverse_sqrt());
  Matrix ta = (isq.mat * f.D.mat * isq.mat).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(f.p.mat);
  const Eigen::VectorXd pev = es.eigenvalues();
  Eigen::VectorXcd pinv_diag(n);
  for (int i = 0; i < n; ++i) pinv_diag(i) = Complex(1.0 / pev(i), 0);
  Matrix pinv = es.eigenvectors() * pinv_diag.asDiagonal() * es.eigenvectors().adjoint();
  Matrix tb = -0.5 * (f.x.mat * pinv + pinv * f.x.mat);

  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (std::abs(pev(i)) >= p_min) keep.push_back(i);
  if (keep.empty())
    throw std::invalid_argument("t0_forms_agreement: no p-eigenvalue clears p_min (empty subspace)");
  Matrix vsel(n, keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j) vsel.col(j) = es.eigenvectors().col(keep[j]);
  Matrix proj = vsel * vsel.adjoint();
  Matrix diff = proj * (ta - tb) * proj;

  T0FormsResult r;
  r.forms_defect = max_abs(diff.topLeftCorner(w.m, w.m));
  Matrix cb = f.H0.mat * tb - tb * f.H0.mat - Complex(0, 1) * Matrix::Identity(n, n);
  r.form_b_commutator = max_abs(cb.topLeftCorner(w.m, w.m));
  r.subspace_dim = static_cast<int>(keep.size());
  return r;
}

}  // namespace vlab
