#include "vlab/timeops.hpp"

#include <cmath>
#include <limits>

namespace vlab {

namespace {

constexpr double kQSectorK = 0.75;

void require_unit_interval(double omega, const char* who) {
  if (!(omega > 0.0 && omega < 1.0))
    throw std::invalid_argument(std::string(who) + ": omega must lie in (0, 1)");
}

OperatorMatrix resolvent_k3w(const ConformalTriple& t, const OmegaFamily& f) {
  OperatorMatrix shifted = f.K3w + Complex(t.sector.k, 0) * identity_like(f.K3w);
  return matfun_hermitian(shifted, fun::inverse());
}

}  // namespace

namespace {

// The summed series B - [A,B] + [A,[A,B]]/2 cancels products of size
// ~N^2 down to O(N); with the exact-tier budget at 1e-12 N the double
// roundoff (~eps N^2) leaves no margin beyond N ~ 256, so the banded
// products are accumulated in long double (zero entries skipped, O(N^2)).
double bch_series_defect_ld(const Matrix& kmat, const Matrix& hmat, double omega,
                            const Matrix& target, int window) {
  using CLD = std::complex<long double>;
  using MatLD = Eigen::Matrix<CLD, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = kmat.rows();
  auto lift = [n](const Matrix& m) {
    MatLD r(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) r(i, j) = CLD(m(i, j).real(), m(i, j).imag());
    return r;
  };
  auto mul = [n](const MatLD& x, const MatLD& y) {
    MatLD r = MatLD::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index kk = 0; kk < n; ++kk) {
        const CLD v = x(i, kk);
        if (v == CLD(0, 0)) continue;
        for (Eigen::Index j = 0; j < n; ++j) r(i, j) += v * y(kk, j);
      }
    return r;
  };
  MatLD a = lift(kmat);
  a *= CLD(omega, 0);
  MatLD b = lift(hmat);
  MatLD c = mul(a, b) - mul(b, a);
  MatLD series = b - c + CLD(0.5, 0) * (mul(a, c) - mul(c, a));
  MatLD tgt = lift(target);
  long double worst = 0;
  for (Eigen::Index i = 0; i < window; ++i)
    for (Eigen::Index j = 0; j < window; ++j) worst = std::max(worst, std::abs(series(i, j) - tgt(i, j)));
  return static_cast<double>(worst);
}

}  // namespace

BchResult bch_conjugation_defect(const ConformalTriple& t, double omega, const Window& w) {
  require_unit_interval(omega, "bch_conjugation_defect");
  const int n = t.sector.N;
  if (w.m > n / 4) throw std::invalid_argument("bch_conjugation_defect: window must be <= N/4");
  OmegaFamily f = omega_family(t, omega);
  OperatorMatrix target = Complex(-2.0 * omega, 0) * f.Kminusw;

  BchResult r;
  r.series_defect = bch_series_defect_ld(t.K.mat, t.H.mat, omega, target.mat, n - 2);

  OperatorMatrix ek = exp_k_kernel(t.sector, omega);
  OperatorMatrix ekm = exp_k_kernel(t.sector, -omega);
  OperatorMatrix conj = ekm * t.H * ek;
  r.exp_form_abs = window_defect(conj, target, w);
  r.exp_form_rel = window_defect_rel(conj, target, w);
  return r;
}

namespace {

TimeOperator assemble_t_omega(const ConformalTriple& t, double omega, int refine_window,
                              bool mirror) {
  require_unit_interval(omega, mirror ? "t_omega_mirror" : "t_omega");
  OmegaFamily f = omega_family(t, omega);
  OperatorMatrix rinv = resolvent_k3w(t, f);
  OperatorMatrix ek = exp_k_kernel(t.sector, omega);
  OperatorMatrix ekm = exp_k_kernel(t.sector, -omega);

  const Complex scale = mirror ? Complex(0, 1.0 / (2.0 * omega)) : Complex(0, -1.0 / (2.0 * omega));
  OperatorMatrix full = mirror ? scale * (ekm * (rinv * (f.Kminusw * ek)))
                               : scale * (ek * (f.Kplusw * (rinv * ekm)));
  const int wb = std::min(refine_window, t.sector.N);
  if (wb > 0) {
    std::vector<const Matrix*> chain =
        mirror ? std::vector<const Matrix*>{&ekm.mat, &rinv.mat, &f.Kminusw.mat, &ek.mat}
               : std::vector<const Matrix*>{&ek.mat, &f.Kplusw.mat, &rinv.mat, &ekm.mat};
    full.mat.topLeftCorner(wb, wb) = scale * product_window_ld(chain, wb);
  }
  TimeOperator op{std::move(full), TimeOperatorKind::t_omega,
                  {{"omega", mirror ? -omega : omega}, {"k", t.sector.k}}};
  return op;
}

}  // namespace

TimeOperator t_omega(const ConformalTriple& t, double omega, int refine_window) {
  return assemble_t_omega(t, omega, refine_window, false);
}

TimeOperator t_omega_mirror(const ConformalTriple& t, double omega, int refine_window) {
  return assemble_t_omega(t, omega, refine_window, true);
}

TimeOperator t_minimal(const ConformalTriple& t) {
  OperatorMatrix isq = matfun_hermitian(t.H, fun::inverse_sqrt());
  OperatorMatrix tm = isq * t.D * isq;
  const auto kind =
      std::abs(t.sector.k - kQSectorK) < 1e-12 ? TimeOperatorKind::t0_sector : TimeOperatorKind::t_minimal;
  return {std::move(tm), kind, {{"k", t.sector.k}}};
}

SmallOmegaReport small_omega_report(const ConformalTriple& t, const std::vector<double>& omegas,
                                    const Window& w) {
  if (omegas.empty()) throw std::invalid_argument("small_omega_report: need at least one omega");
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (!(omegas[i] > 0.0 && omegas[i] <= 0.5))
      throw std::invalid_argument("small_omega_report: omegas must lie in (0, 0.5]");
    if (i && omegas[i] >= omegas[i - 1])
      throw std::invalid_argument("small_omega_report: omegas must be descending");
  }
  const double k = t.sector.k;
  TimeOperator tmin = t_minimal(t);
  OperatorMatrix hinv = matfun_hermitian(t.H, fun::inverse());
  OperatorMatrix eye = identity_like(t.H);

  SmallOmegaReport r;
  r.omegas = omegas;
  for (double om : omegas) {
    TimeOperator top = t_omega(t, om, w.m + 2);
    OperatorMatrix herm = hermitian_part(top.matrix);
    OperatorMatrix anti = antihermitian_part(top.matrix);
    r.herm_error.push_back(window_defect(herm, tmin.matrix, w));
    OperatorMatrix lead = Complex(0, 1.0 / (2.0 * om)) * eye;
    OperatorMatrix derived = lead + Complex(0, (1.0 - 2.0 * k) / 2.0) * hinv;
    OperatorMatrix printed = lead + Complex(0, (2.0 * k + 1.0) / 2.0) * hinv;
    r.anti_error.push_back(window_defect(anti, derived, w));
    r.anti_error_printed.push_back(window_defect(anti, printed, w));
  }
  for (std::size_t i = 0; i + 1 < omegas.size(); ++i) {
    const double lw = std::log(omegas[i] / omegas[i + 1]);
    r.herm_order.push_back(std::log(r.herm_error[i] / r.herm_error[i + 1]) / lw);
    r.anti_order.push_back(std::log(r.anti_error[i] / r.anti_error[i + 1]) / lw);
  }
  OperatorMatrix dmin = commutator(t.H, tmin.matrix) - Complex(0, 1) * eye;
  r.minimal_floor = max_abs(dmin.mat.topLeftCorner(w.m, w.m));
  r.half_inv_omega_mag = 1.0 / (2.0 * omegas.back());
  return r;
}

DefectRecord x_defect(const OperatorMatrix& h, const TimeOperator& t, const Window& w) {
  require_same_basis(h, t.matrix);
  OperatorMatrix eye = identity_like(h);
  OperatorMatrix defect = commutator(h, t.matrix) - Complex(0, 1) * eye;
  OperatorMatrix sandwich = h * defect * h;
  DefectRecord r{defect, sandwich, 0, 0, 0, 0};
  OperatorMatrix zero{Matrix::Zero(h.dim(), h.dim()), h.basis};
  r.defect_abs = window_defect(defect, zero, w);
  r.defect_rel = window_defect_rel(commutator(h, t.matrix), Complex(0, 1) * eye, w);
  r.sandwich_abs = window_defect(sandwich, zero, w);
  const double hscale = max_abs(h.mat.topLeftCorner(w.m, w.m));
  r.sandwich_scaled = r.sandwich_abs / std::max(1.0, hscale * hscale);
  return r;
}

TimeOperator q_operator(const Sector& s) {
  if (std::abs(s.k - kQSectorK) > 1e-12)
    throw std::invalid_argument("q_operator: defined on the k = 3/4 (g = 0) sector only");
  ConformalTriple t = conformal_triple(s);
  TimeOperator t0 = t_minimal(t);
  OperatorMatrix hinv = matfun_hermitian(t.H, fun::inverse());
  OperatorMatrix q = Complex(-1, 0) * t0.matrix + Complex(0, 0.25) * hinv;
  return {std::move(q), TimeOperatorKind::q_op, {{"k", s.k}}};
}

KIdentityResult k_identity_defect(const Sector& s, const Window& w) {
  if (std::abs(s.k - kQSectorK) > 1e-12)
    throw std::invalid_argument("k_identity_defect: defined on the k = 3/4 sector only");
  ConformalTriple t = conformal_triple(s);
  TimeOperator t0 = t_minimal(t);
  OperatorMatrix hinv = matfun_hermitian(t.H, fun::inverse());
  OperatorMatrix q = Complex(-1, 0) * t0.matrix + Complex(0, 0.25) * hinv;
  OperatorMatrix form1 = t0.matrix * t.H * t0.matrix + Complex(1.0 / 16.0, 0) * hinv;
  OperatorMatrix form2 = q * t.H * q - Complex(0, 0.5) * q;
  KIdentityResult r;
  r.forms_disagree = window_defect(form1, form2, w);
  r.k_vs_form1 = window_defect(t.K, form1, w);
  r.k_vs_form2 = window_defect(t.K, form2, w);
  return r;
}

THarmonicResult t_harmonic(const Sector& s, double omega, const Window& w) {
  if (std::abs(s.k - kQSectorK) > 1e-12)
    throw std::invalid_argument("t_harmonic: defined on the k = 3/4 sector only");
  if (!(omega > 0.0)) throw std::invalid_argument("t_harmonic: omega must be positive");
  ConformalTriple t = conformal_triple(s);
  TimeOperator t0 = t_minimal(t);
  OperatorMatrix hinv = matfun_hermitian(t.H, fun::inverse());
  OperatorMatrix q = Complex(-1, 0) * t0.matrix + Complex(0, 0.25) * hinv;
  OperatorMatrix wq = Complex(omega, 0) * q;

  EigenDecomp d = eigendecompose(wq);
  THarmonicResult r{TimeOperator{}, 0, 0, 0, 0, 0, d.vector_cond};
  double bd = std::numeric_limits<double>::infinity();
  for (int i = 0; i < wq.dim(); ++i)
    bd = std::min({bd, std::abs(d.eigenvalues(i) - Complex(0, 1)),
                   std::abs(d.eigenvalues(i) + Complex(0, 1))});
  r.branch_distance = bd;

  OperatorMatrix thq = matfun_diagonalizable(
      wq, [omega](Complex lam) { return std::atan(lam) / omega; },
      {Complex(0, 1), Complex(0, -1)});
  OperatorMatrix th = hermitian_part(thq);
  r.hermiticity = hermiticity_defect(th) / std::max(1.0, max_abs(th.mat));

  OperatorMatrix hh = t.H + Complex(omega * omega, 0) * t.K;
  // 2w K3w assembled the (wK + H/w) way; built directly since omega may exceed 1 here
  OperatorMatrix k3w_scaled =
      Complex(omega, 0) * (Complex(omega, 0) * t.K + Complex(1.0 / omega, 0) * t.H);
  r.h_identity = max_abs(hh.mat - k3w_scaled.mat);

  OperatorMatrix eye = identity_like(hh);
  OperatorMatrix cm = commutator(hh, th);
  OperatorMatrix zero{Matrix::Zero(hh.dim(), hh.dim()), hh.basis};
  r.defect_plus_i = window_defect(cm - Complex(0, 1) * eye, zero, w);
  r.defect_minus_i = window_defect(cm + Complex(0, 1) * eye, zero, w);
  r.th = {std::move(th), TimeOperatorKind::t_harmonic, {{"omega", omega}, {"k", s.k}}};
  return r;
}

CommutatorDefect commutator_defect(const OperatorMatrix& h, const TimeOperator& t, const Window& w) {
  require_same_basis(h, t.matrix);
  OperatorMatrix eye = identity_like(h);
  OperatorMatrix cm = commutator(h, t.matrix);
  OperatorMatrix zero{Matrix::Zero(h.dim(), h.dim()), h.basis};
  CommutatorDefect r;
  r.abs = window_defect(cm - Complex(0, 1) * eye, zero, w);
  r.rel = window_defect_rel(cm, Complex(0, 1) * eye, w);
  return r;
}

double trace_obstruction(const OperatorMatrix& h, const TimeOperator& t) {
  OperatorMatrix cm = commutator(h, t.matrix);
  const Complex tr = cm.mat.trace() - Complex(0, 1) * static_cast<double>(h.dim());
  return std::abs(tr);
}

}  // namespace vlab
