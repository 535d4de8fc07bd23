#ifndef VLAB_TIMEOPS_HPP
#define VLAB_TIMEOPS_HPP

#include <map>
#include <vector>

#include "vlab/conformal.hpp"

namespace vlab {

enum class TimeOperatorKind { t_omega, t_minimal, t0_sector, q_op, t_harmonic, t_cs };

struct TimeOperator {
  OperatorMatrix matrix;
  TimeOperatorKind kind;
  std::map<std::string, double> params;
};

/// Windowed residual of e^{-wK} H e^{wK} + 2w K-w.  The summed BCH series
/// (exact tier, no exponentials) is available separately.
struct BchResult {
  double series_defect;       // three-term sum vs -2wK-w, leading N-2 block
  double exp_form_abs;
  double exp_form_rel;
};
BchResult bch_conjugation_defect(const ConformalTriple& t, double omega, const Window& w);

/// T(w) = -(i/2w) e^{wK} K+w (K3w+k)^{-1} e^{-wK}.  The leading
/// refine_window block is recomputed in extended precision (the windowed
/// commutator and adjoint identities sit at the 1e-10 scale).
TimeOperator t_omega(const ConformalTriple& t, double omega, int refine_window = 34);
/// Mirror construction realizing T(-w): +(i/2w) e^{-wK} (K3w+k)^{-1} K-w e^{wK}.
TimeOperator t_omega_mirror(const ConformalTriple& t, double omega, int refine_window = 34);

/// T = H^{-1/2} D H^{-1/2} (minimal Hermitian choice).
TimeOperator t_minimal(const ConformalTriple& t);

struct SmallOmegaReport {
  std::vector<double> omegas;
  std::vector<double> herm_error;          // |herm T(w) - t_minimal| windowed
  std::vector<double> anti_error;          // vs i/2w + i(1-2k)/(2H)
  std::vector<double> anti_error_printed;  // vs i/2w + i(2k+1)/(2H) as printed
  std::vector<double> herm_order;          // successive Richardson estimates
  std::vector<double> anti_order;
  double minimal_floor;                    // [H, t_minimal] - i windowed defect
  double half_inv_omega_mag;               // 1/(2 w_last)
};

/// Small-omega expansion diagnostics.  The anti-Hermitian comparison is
/// made against both the coefficient that follows from the construction,
/// (1-2k)/2, and the printed (2k+1)/2 form; see the commutator identity
/// [f(H), D] = i H f'(H) for the derivation.  Report-only tier.
SmallOmegaReport small_omega_report(const ConformalTriple& t, const std::vector<double>& omegas,
                                    const Window& w);

struct DefectRecord {
  OperatorMatrix defect;     // [H,T] - i
  OperatorMatrix sandwich;   // H ([H,T] - i) H
  double defect_abs, defect_rel;
  double sandwich_abs;
  double sandwich_scaled;    // sandwich / max(1, |WHW|^2)
};
DefectRecord x_defect(const OperatorMatrix& h, const TimeOperator& t, const Window& w);

/// Q = -T0 + (i/4) H0^{-1} for the k = 3/4 sector.
TimeOperator q_operator(const Sector& s);

struct KIdentityResult {
  double forms_disagree;   // the two right-hand sides against each other
  double k_vs_form1;       // K - (T0 H0 T0 + H0^{-1}/16)
  double k_vs_form2;       // K - (Q H0 Q - iQ/2)
};
KIdentityResult k_identity_defect(const Sector& s, const Window& w);

struct THarmonicResult {
  TimeOperator th;
  double hermiticity;
  double h_identity;        // H0 + w^2 K vs 2w K3w, exact
  double defect_plus_i;     // |[Hh,Th] - i| windowed
  double defect_minus_i;    // |[Hh,Th] + i| windowed (sign diagnostic)
  double branch_distance;   // min distance of spec(wQ) to +-i
  double eigvec_cond;
};
THarmonicResult t_harmonic(const Sector& s, double omega, const Window& w);

struct CommutatorDefect {
  double abs, rel;
};
CommutatorDefect commutator_defect(const OperatorMatrix& h, const TimeOperator& t, const Window& w);

/// |trace([H,T] - i)| -- equals N for any T in exact arithmetic; windowing
/// is essential precisely because of this obstruction.
double trace_obstruction(const OperatorMatrix& h, const TimeOperator& t);

}  // namespace vlab

#endif
