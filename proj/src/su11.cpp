#include "vlab/su11.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace vlab {

std::string Sector::basis_tag() const {
  std::ostringstream os;
  os << "sector:k=" << k << ":N=" << N;
  return os.str();
}

Sector sector_from_k(double k, int N) {
  if (!(k > 0)) throw std::invalid_argument("sector_from_k: k must be positive");
  if (N < 4) throw std::invalid_argument("sector: N >= 4 required (windowed checks need interior room)");
  return {k, std::nullopt, N};
}

Sector sector_from_g(double g, int N) {
  if (g < 0) throw std::invalid_argument("sector_from_g: g must be nonnegative");
  if (N < 4) throw std::invalid_argument("sector: N >= 4 required (windowed checks need interior room)");
  Sector s{0.5 * (1.0 + std::sqrt(g + 0.25)), g, N};
  return s;
}

namespace {

double amp(const Sector& s, int n) { return std::sqrt((n + 1.0) * (n + 2.0 * s.k)); }

}  // namespace

GeneratorSet generators(const Sector& s) {
  const int n = s.N;
  const std::string tag = s.basis_tag();
  Matrix k3 = Matrix::Zero(n, n), kp = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) k3(i, i) = i + s.k;
  for (int i = 0; i + 1 < n; ++i) kp(i + 1, i) = amp(s, i);
  Matrix km = kp.adjoint();
  Matrix k1 = 0.5 * (kp + km);
  Matrix k2 = (kp - km) / Complex(0, 2);
  return {{std::move(k3), tag}, {std::move(kp), tag}, {std::move(km), tag},
          {std::move(k1), tag}, {std::move(k2), tag}};
}

OperatorMatrix casimir(const Sector& s) {
  GeneratorSet g = generators(s);
  OperatorMatrix anti = g.Kplus * g.Kminus + g.Kminus * g.Kplus;
  return g.K3 * g.K3 - Complex(0.5, 0) * anti;
}

namespace {

// log |c_n| and phase: c_n = z^n sqrt(Gamma(2k)/(Gamma(2k+n) n!)).
// Built by the ratio recurrence c_{n+1} = c_n z/sqrt((n+1)(n+2k)) in
// magnitude-log form so deep tails neither underflow nor overflow.
struct BgCoeffs {
  std::vector<double> logmag;  // natural log of |c_n|
  std::vector<Complex> phase;  // unit phases
};

BgCoeffs bg_log_coeffs(const Sector& s, Complex z) {
  BgCoeffs c;
  c.logmag.resize(s.N);
  c.phase.resize(s.N);
  c.logmag[0] = 0.0;
  c.phase[0] = Complex(1, 0);
  const double az = std::abs(z);
  const Complex ph = az > 0 ? z / az : Complex(1, 0);
  for (int n = 0; n + 1 < s.N; ++n) {
    c.logmag[n + 1] = c.logmag[n] + (az > 0 ? std::log(az) : -std::numeric_limits<double>::infinity()) -
                      0.5 * std::log((n + 1.0) * (n + 2.0 * s.k));
    c.phase[n + 1] = c.phase[n] * ph;
  }
  return c;
}

}  // namespace

CoherentVector bg_state_series(const Sector& s, Complex z) {
  BgCoeffs lc = bg_log_coeffs(s, z);
  CoherentVector v;
  v.z = z;
  v.coefficients.resize(s.N);
  double log_norm_sq = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < s.N; ++n) {
    const double l = lc.logmag[n];
    v.coefficients(n) = std::isfinite(l) ? lc.phase[n] * std::exp(l) : Complex(0, 0);
    if (std::isfinite(l)) {
      const double a = std::max(log_norm_sq, 2 * l), b = std::min(log_norm_sq, 2 * l);
      log_norm_sq = a + std::log1p(std::exp(b - a));
    }
    if (!std::isfinite(v.coefficients(n).real()))
      throw std::overflow_error("bg_state_series: coefficient magnitude exceeds exponent range");
  }
  v.norm = std::exp(0.5 * log_norm_sq);
  const double az = std::abs(z);
  v.tail_warning = az * az > s.N * std::min(1.0, 2.0 * s.k);
  // (K- - z)v = -z c_{N-1} e_{N-1} identically for ratio-exact coefficients
  if (az > 0 && std::isfinite(lc.logmag[s.N - 1])) {
    v.log10_eigen_residual = (std::log(az) + lc.logmag[s.N - 1] - 0.5 * log_norm_sq) / std::log(10.0);
  } else {
    v.log10_eigen_residual = -std::numeric_limits<double>::infinity();
  }
  v.eigen_residual = std::pow(10.0, v.log10_eigen_residual);
  return v;
}

CoherentVector bg_state_exponential(const Sector& s, Complex z) {
  GeneratorSet g = generators(s);
  Matrix lower = Matrix::Zero(s.N, s.N);
  for (int n = 0; n + 1 < s.N; ++n) lower(n + 1, n) = z * amp(s, n) / (n + 2.0 * s.k);
  OperatorMatrix e = expm_nilpotent({std::move(lower), s.basis_tag()});
  CoherentVector v = bg_state_series(s, z);  // shared residual diagnostics
  v.coefficients = e.mat.col(0);
  v.norm = v.coefficients.norm();
  return v;
}

namespace {

Matrix ladder_canonical(const Sector& s) {
  // K+ (K3+k)^{-1}: subdiagonal sqrt((n+1)/(n+2k))
  Matrix a = Matrix::Zero(s.N, s.N);
  for (int n = 0; n + 1 < s.N; ++n) a(n + 1, n) = amp(s, n) / (n + 2.0 * s.k);
  return a;
}

}  // namespace

double gamma_shift_defect(const Sector& s, int n, const Window& w) {
  if (n < 1 || n > s.N - 2) throw std::invalid_argument("gamma_shift: need 1 <= n <= N-2");
  if (w.m > s.N - n)
    throw std::invalid_argument("gamma_shift: window exceeds defect-free region N-n");
  const std::string tag = s.basis_tag();
  Matrix a = ladder_canonical(s);
  Matrix lhs = Matrix::Identity(s.N, s.N);
  for (int j = 0; j < n; ++j) lhs = lhs * a;

  GeneratorSet g = generators(s);
  Matrix kpn = Matrix::Identity(s.N, s.N);
  for (int j = 0; j < n; ++j) kpn = kpn * g.Kplus.mat;
  // diagonal Gamma(K3+k)/Gamma(K3+k+n) via log-gamma differences
  Matrix ratio = Matrix::Zero(s.N, s.N);
  for (int m = 0; m < s.N; ++m) {
    const double x = m + 2.0 * s.k;
    ratio(m, m) = std::exp(std::lgamma(x) - std::lgamma(x + n));
  }
  Matrix rhs = kpn * ratio;
  return window_defect({std::move(lhs), tag}, {std::move(rhs), tag}, w);
}

double canonical_pair_defect(const Sector& s, const Window& w) {
  if (w.m > s.N - 1)
    throw std::invalid_argument("canonical_pair: window exceeds defect-free region N-1");
  const std::string tag = s.basis_tag();
  GeneratorSet g = generators(s);
  OperatorMatrix a{ladder_canonical(s), tag};
  OperatorMatrix c = commutator(g.Kminus, a);
  return window_defect(c, identity_like(c), w);
}

double ladder_corner_defect_exact(const Sector& s) {
  const double n1 = s.N - 1.0;
  return -n1 * (s.N - 2.0 + 2.0 * s.k) - 2.0 * (n1 + s.k);
}

}  // namespace vlab
