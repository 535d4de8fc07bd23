#include "vlab/conformal.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace vlab {

HamiltonianCase classify(const OmegaVector& o) {
  const double scale = o.o1 * o.o1 + o.o2 * o.o2 + o.o3 * o.o3;
  const double n2 = o.norm_sq();
  if (std::abs(n2) <= 1e-12 * scale) return o.o3 > 0 ? HamiltonianCase::case_b : HamiltonianCase::unsupported;
  if (n2 > 0 && o.o3 > 0) return HamiltonianCase::case_a;
  return HamiltonianCase::unsupported;
}

ConformalTriple conformal_triple(const Sector& s) {
  GeneratorSet g = generators(s);
  return {s, g.K3 - g.K1, g.K2, g.K3 + g.K1};
}

OmegaFamily omega_family(const ConformalTriple& t, double omega) {
  if (!(omega > 0.0) || omega > 1.0)
    throw std::invalid_argument("omega_family: omega must lie in (0, 1]");
  const Complex half(0.5, 0);
  OperatorMatrix K3w = half * (Complex(omega, 0) * t.K + Complex(1.0 / omega, 0) * t.H);
  OperatorMatrix K1w = half * (Complex(omega, 0) * t.K - Complex(1.0 / omega, 0) * t.H);
  OperatorMatrix Kpw = K1w + Complex(0, 1) * t.D;
  OperatorMatrix Kmw = K1w - Complex(0, 1) * t.D;
  return {omega, std::move(K3w), std::move(K1w), t.D, std::move(Kpw), std::move(Kmw)};
}

OperatorMatrix linear_hamiltonian(const Sector& s, const OmegaVector& o) {
  GeneratorSet g = generators(s);
  return Complex(o.o3, 0) * g.K3 + Complex(o.o2, 0) * g.K2 + Complex(o.o1, 0) * g.K1;
}

namespace {

Eigen::VectorXd lowest_eigenvalues(const Sector& s, const OmegaVector& o, int count) {
  OperatorMatrix h = linear_hamiltonian(s, o);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.mat, Eigen::EigenvaluesOnly);
  return es.eigenvalues().head(count);
}

}  // namespace

SpectralCheck case_a_spectrum(const Sector& s, const OmegaVector& o, int count) {
  if (classify(o) != HamiltonianCase::case_a)
    throw std::invalid_argument("case_a_spectrum: Omega vector is not case (a)");
  if (count > s.N / 4) throw std::invalid_argument("case_a_spectrum: count must be <= N/4");

  OperatorMatrix h = linear_hamiltonian(s, o);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.mat);
  Sector s2 = s;
  s2.N = 2 * s.N;
  Eigen::VectorXd big = lowest_eigenvalues(s2, o, count);

  const double om = std::sqrt(o.norm_sq());
  SpectralCheck r;
  r.vectors = es.eigenvectors().leftCols(count);
  for (int n = 0; n < count; ++n) {
    const double ev = es.eigenvalues()(n);
    r.eigenvalues.push_back(ev);
    r.reference.push_back(om * (n + s.k));
    r.deviation.push_back(std::abs(ev - om * (n + s.k)));
    r.self_convergence.push_back(std::abs(ev - big(n)));
  }
  return r;
}

ConformalDefects algebra_defects(const ConformalTriple& t, const Window& w) {
  const int n = t.sector.N;
  if (w.m > n - 2) throw std::invalid_argument("algebra_defects: window must be <= N-2");
  const Complex i(0, 1);
  OperatorMatrix zero{Matrix::Zero(n, n), t.H.basis};
  ConformalDefects d;
  d.hd = window_defect(commutator(t.H, t.D) - i * t.H, zero, w);
  d.kd = window_defect(commutator(t.K, t.D) + i * t.K, zero, w);
  d.hk = window_defect(commutator(t.H, t.K) - Complex(0, 2) * t.D, zero, w);
  const double g = t.sector.g ? *t.sector.g : 0.0;
  const double cas = t.sector.g ? (g / 4.0 - 3.0 / 16.0) : t.sector.k * (t.sector.k - 1.0);
  OperatorMatrix lhs = Complex(0.5, 0) * (t.H * t.K + t.K * t.H) - t.D * t.D;
  OperatorMatrix ref{Matrix::Identity(n, n) * cas, t.H.basis};
  d.casimir = window_defect(lhs, ref, w);
  return d;
}

OperatorMatrix exp_k_kernel(const Sector& s, double omega) {
  if (std::abs(omega) >= 1.0)
    throw std::invalid_argument("exp_k_kernel: require |omega| < 1 (e^{omega K} matrix elements diverge at omega >= 1)");
  const int n = s.N;
  const double g = 2.0 * s.k;
  const double sc = 1.0 - omega / 2.0;
  const double a = std::abs(1.0 - sc) / sc;
  Matrix out = Matrix::Zero(n, n);
  if (a == 0.0) return {Matrix::Identity(n, n), s.basis_tag()};
  const double lga = std::log(a);
  std::vector<double> lgam(n + 1);
  for (int j = 0; j <= n; ++j) lgam[j] = std::lgamma(j + g);
  std::vector<double> lfac(n + 1);
  lfac[0] = 0;
  for (int j = 1; j <= n; ++j) lfac[j] = lfac[j - 1] + std::log(static_cast<double>(j));
  const double lgg = std::lgamma(g);
  for (int m = 0; m < n; ++m) {
    for (int nn = 0; nn <= m; ++nn) {
      // log of the r=0 term including prefactors
      double lt = 0.5 * (lgam[m] - lfac[m]) + 0.5 * (lgam[nn] - lfac[nn]) + (m + nn) * lga -
                  lgg - g * std::log(sc);
      double acc = 1.0, term = 1.0, shift = 0.0;
      for (int r = 0; r < std::min(m, nn); ++r) {
        term *= (m - r) * static_cast<double>(nn - r) / ((r + 1.0) * sc * sc * a * a * (g + r));
        acc += term;
        if (acc > 1e250) {
          acc *= 1e-250;
          term *= 1e-250;
          shift += 250.0 * std::log(10.0);
        }
      }
      const double lv = lt + shift + std::log(acc);
      if (lv > 700.0)
        throw std::overflow_error("exp_k_kernel: matrix element exceeds exponent range at (" +
                                  std::to_string(m) + "," + std::to_string(nn) + ")");
      double v = std::exp(lv);
      if (omega < 0 && ((m + nn) % 2 == 1)) v = -v;
      out(m, nn) = v;
      out(nn, m) = v;
    }
  }
  return {std::move(out), s.basis_tag()};
}

EnergyEigenResult energy_eigenvector(const ConformalTriple& t, double omega, double energy,
                                     const Window& w) {
  if (!(omega > 0.0 && omega < 1.0))
    throw std::invalid_argument("energy_eigenvector: omega must lie in (0, 1)");
  if (!(energy > 0.0)) throw std::invalid_argument("energy_eigenvector: E must be positive");
  const Sector& s = t.sector;
  const int n = s.N;
  OmegaFamily f = omega_family(t, omega);

  Eigen::SelfAdjointEigenSolver<Matrix> es(f.K3w.mat);
  Eigen::MatrixXd v = es.eigenvectors().real();
  // ladder-consistent phases: <v_{n+1}| K+w |v_n> > 0
  Eigen::MatrixXd kpw = f.Kplusw.mat.real();
  for (int j = 0; j + 1 < n; ++j) {
    const double ip = v.col(j + 1).dot(kpw * v.col(j));
    if (ip < 0) v.col(j + 1) *= -1.0;
  }

  const Complex z(-energy / (2.0 * omega), 0);
  CoherentVector bg = bg_state_series(sector_from_k(s.k, n), z);
  Eigen::VectorXd coeff = bg.coefficients.real();
  Eigen::VectorXd family_vec = v * coeff;

  EnergyEigenResult r;
  {
    Vector fv = family_vec.cast<Complex>();
    Vector resid = f.Kminusw.mat * fv - z * fv;
    r.bg_interior_residual = resid.head(n - 2).norm() / fv.norm();
  }
  OperatorMatrix ek = exp_k_kernel(s, omega);
  Eigen::VectorXd evec = ek.mat.real() * family_vec;
  Eigen::VectorXd hre = (t.H.mat * evec.cast<Complex>()).real() - energy * evec;
  const double num = hre.head(w.m).norm();
  const double den = evec.head(w.m).norm();
  r.windowed_residual = num / den;
  r.vector_norm = evec.norm();
  return r;
}

}  // namespace vlab
