#ifndef VLAB_SU11_HPP
#define VLAB_SU11_HPP

#include <optional>

#include "vlab/matfun.hpp"
#include "vlab/matrix.hpp"

namespace vlab {

/// Discrete-series representation slot: Bargmann index k, truncation N.
/// When built from the singular coupling g, k = (1 + sqrt(g + 1/4))/2.
struct Sector {
  double k = 0;
  std::optional<double> g;
  int N = 0;

  std::string basis_tag() const;
};

Sector sector_from_k(double k, int N);
Sector sector_from_g(double g, int N);

/// K3 diagonal n+k; (K+)_{n+1,n} = sqrt((n+1)(n+2k)); K- = adjoint(K+);
/// K1 = (K+ + K-)/2, K2 = (K+ - K-)/(2i).
struct GeneratorSet {
  OperatorMatrix K3, Kplus, Kminus, K1, K2;
};

GeneratorSet generators(const Sector& s);

/// K3^2 - (K+K- + K-K+)/2; equals k(k-1) on the leading (N-1) block.
OperatorMatrix casimir(const Sector& s);

/// Unnormalized Barut-Girardello coefficients plus diagnostics.  The
/// truncation residual ||(K- - z)v||/||v|| reduces to |z c_{N-1}|/||c||
/// for a ratio-exact coefficient vector, so it is reported in that form
/// (with a log10 variant that cannot underflow).
struct CoherentVector {
  Complex z;
  Vector coefficients;
  double norm = 0;
  double eigen_residual = 0;
  double log10_eigen_residual = 0;
  bool tail_warning = false;  // |z|^2 beyond the soft bound N*min(1,2k)
};

CoherentVector bg_state_series(const Sector& s, Complex z);
/// Same state via expm_nilpotent(z K+ (K3+k)^{-1}) |0,k>.
CoherentVector bg_state_exponential(const Sector& s, Complex z);

/// Residual of [K+(K3+k)^{-1}]^n against K+^n Gamma(K3+k)/Gamma(K3+k+n)
/// over the window (defect-free region M <= N-n).
double gamma_shift_defect(const Sector& s, int n, const Window& w);
/// Residual of [K-, K+(K3+k)^{-1}] - 1 over the window (M <= N-1).
double canonical_pair_defect(const Sector& s, const Window& w);

/// Corner (N-1,N-1) of [K-,K+] - 2K3 in truncation: -(N-1)(N-2+2k) - 2(N-1+k).
double ladder_corner_defect_exact(const Sector& s);

}  // namespace vlab

#endif
