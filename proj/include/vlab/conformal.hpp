#ifndef VLAB_CONFORMAL_HPP
#define VLAB_CONFORMAL_HPP

#include <vector>

#include "vlab/su11.hpp"

namespace vlab {

struct OmegaVector {
  double o1 = 0, o2 = 0, o3 = 0;
  double norm_sq() const { return o3 * o3 - o2 * o2 - o1 * o1; }
};

enum class HamiltonianCase { case_a, case_b, unsupported };

/// case_a: norm^2 > 0 and O3 > 0 (discrete spectrum); case_b: norm^2 = 0
/// within 1e-12 of the coefficient scale and O3 > 0 (continuous spectrum).
HamiltonianCase classify(const OmegaVector& o);

/// Fixed-basis conformal triple of the singular oscillator at reference
/// frequency 1: H = K3 - K1, D = K2, K = K3 + K1.
struct ConformalTriple {
  Sector sector;
  OperatorMatrix H, D, K;
};

ConformalTriple conformal_triple(const Sector& s);

/// The omega-parametrized generators obtained by inverting the
/// identification: K3w = (wK + H/w)/2, K1w = (wK - H/w)/2, K2w = D.
struct OmegaFamily {
  double omega = 0;
  OperatorMatrix K3w, K1w, K2w, Kplusw, Kminusw;
};

OmegaFamily omega_family(const ConformalTriple& t, double omega);  // 0 < omega <= 1

OperatorMatrix linear_hamiltonian(const Sector& s, const OmegaVector& o);

struct SpectralCheck {
  std::vector<double> eigenvalues;      // lowest `count`, ascending
  std::vector<double> reference;        // Omega*(n+k)
  std::vector<double> deviation;        // |eig - ref|
  std::vector<double> self_convergence; // |eig(N) - eig(2N)|
  Matrix vectors;                       // expansion columns C_n(lambda)
};

/// Lowest eigenvalues of the truncated case-(a) Hamiltonian against
/// sqrt(norm^2)*(n+k), with an N -> 2N self-convergence estimate.
SpectralCheck case_a_spectrum(const Sector& s, const OmegaVector& o, int count);

/// Windowed residuals of the conformal algebra and the Casimir constant:
/// [H,D]-iH, [K,D]+iK, [H,K]-2iD, (HK+KH)/2 - D^2 - (g/4-3/16).
struct ConformalDefects {
  double hd, kd, hk, casimir;
};
ConformalDefects algebra_defects(const ConformalTriple& t, const Window& w);  // w.m <= N-2

/// Exact matrix elements <m|e^{omega K}|n> of the Gaussian dilation kernel
/// in the sector basis, |omega| < 1 attractive range for +omega.  Evaluated
/// from the closed-form single sum with same-sign terms (the dense
/// eigendecomposition route loses all significance beyond N ~ 100: its
/// absolute error floor is eps * exp(omega lambda_max)).
OperatorMatrix exp_k_kernel(const Sector& s, double omega);

struct EnergyEigenResult {
  double windowed_residual = 0;
  double vector_norm = 0;        // growth documents the E -> 0 remark
  double bg_interior_residual = 0;
};

/// |E> = e^{omega K} |z=-E/(2 omega), k>_omega built in the K3w eigenbasis;
/// reports the windowed relative residual of (H - E)|E>.  Report-only: the
/// continuum eigenvector is non-normalizable.
EnergyEigenResult energy_eigenvector(const ConformalTriple& t, double omega, double energy,
                                     const Window& w);

}  // namespace vlab

#endif
