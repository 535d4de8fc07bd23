#ifndef VLAB_INTERTWINE_HPP
#define VLAB_INTERTWINE_HPP

#include "vlab/timeops.hpp"

namespace vlab {

enum class OverlapMethod { gamma_sum, quadrature };

/// Cross-sector overlap S_{mn} = <psi_m^{(k_row)} | psi_n^{(k_col)}> of the
/// half-line Laguerre realizations psi_n = (-1)^n C_n x^{2k-1/2} e^{-x^2/2}
/// L_n^{(2k-1)}(x^2).  The staggered sign is forced by the positive ladder
/// amplitudes of the abstract basis.  As a map it sends k_col coefficients
/// to k_row coefficients.
struct OverlapMatrix {
  OperatorMatrix S;
  OverlapMethod method;
  double k_row, k_col;
};

OverlapMatrix overlap_matrix(double k_row, double k_col, int N, OverlapMethod method);

/// Closed-form vacuum overlap: Gamma(k_row+k_col)/sqrt(Gamma(2k_row)Gamma(2k_col)).
double overlap_s00_exact(double k_row, double k_col);

enum class IntertwinerKind { u_phase, u1_nilpotent };

struct Intertwiner {
  OperatorMatrix matrix;
  IntertwinerKind kind;
  double k, k0;
};

/// U = P_k(-pi) S(k<-k0) P_{k0}(+pi) with diagonal phases e^{i theta (n+kappa)};
/// maps k0-sector coefficients to k-sector coefficients.
Intertwiner unitary_U(double k, double k0, int N);
double unitarity_defect(const Intertwiner& u, const Window& w);  // |W(U+U - I)W|

/// U1 = e^{-K-(k)} S(k<-k0) e^{K-(k0)}; nilpotent exponentials are exact,
/// all approximation lives in S.
Intertwiner intertwiner_U1(double k, double k0, int N);

/// Windowed residual of U A_from U^{-1} - A_to (adjoint inverse for the
/// phase kind, pseudo-inverted overlap for the nilpotent kind).
double transport_defect(const Intertwiner& u, const OperatorMatrix& a_from,
                        const OperatorMatrix& a_to, const Window& w);

/// T_CS = U1 T_h U1^{-1}, with H_CS = 2 omega K3 in sector k.  Report-only.
struct TcsResult {
  TimeOperator tcs;
  double commutator_defect_abs;  // |[H_CS, T_CS] - i| windowed
  double window_scale;           // |T_CS| over the window, for context
};
TcsResult t_cs(double k, double k0, double omega, int N, const Window& w);

/// Full-line oscillator ladder realization for the arrival-time checks.
struct FockLine {
  int N;
  OperatorMatrix x, p, H0, D, K;
};

FockLine fock_line(int N);  // N even, >= 8 (odd N makes truncated p singular)

struct T0FormsResult {
  double forms_defect;        // compressed |W(TA - TB)W|, |p| >= p_min subspace
  double form_b_commutator;   // |[H0, TB] - i| windowed
  int subspace_dim;
};

/// Compares T0 = H0^{-1/2} D H0^{-1/2} with -(x p^{-1} + p^{-1} x)/2 after
/// compression onto p-eigenvectors with |eigenvalue| >= p_min.
T0FormsResult t0_forms_agreement(const FockLine& f, double p_min, const Window& w);

}  // namespace vlab

#endif
