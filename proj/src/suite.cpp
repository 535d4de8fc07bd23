#include "vlab/suite.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "nlohmann/json.hpp"
#include "vlab/csv.hpp"
#include "vlab/intertwine.hpp"

namespace vlab {

namespace {
constexpr double kReferenceK0 = 0.75;  // the paper's g = 0 sector
}

double SuiteConfig::sector_k() const {
  if (k) return *k;
  if (g) return 0.5 * (1.0 + std::sqrt(*g + 0.25));
  throw ConfigError("sector underspecified: provide exactly one of --k or --g");
}

int SuiteConfig::default_window() const { return window ? *window : std::min(16, N / 4); }

double SuiteConfig::default_omega() const { return omega ? *omega : 0.5; }

void SuiteConfig::validate(bool for_suite) const {
  if (k && g) throw ConfigError("exactly one of --k / --g may be given, not both");
  if (!k && !g) throw ConfigError("one of --k / --g is required");
  if (k && !(*k > 0)) throw ConfigError("k must be positive");
  if (g && *g < 0) throw ConfigError("g must be nonnegative");
  if (N < (for_suite ? 8 : 4))
    throw ConfigError("dimension too small for this operation");
  if (window && (*window < 1 || *window >= N)) throw ConfigError("window must satisfy 1 <= M < N");
  if (omega && !(*omega > 0)) throw ConfigError("omega must be positive");
  if (!for_suite) return;
  static const char* names[] = {"algebra", "coherent", "conformal", "timeops", "intertwine", "all"};
  bool ok = false;
  for (const char* s : names) ok = ok || suite == s;
  if (!ok) throw ConfigError("unknown suite: " + suite);
  const bool needs_unit_omega = suite == "timeops" || suite == "conformal" || suite == "all";
  if (omega && needs_unit_omega && !(*omega > 0 && *omega < 1))
    throw ConfigError("omega outside the valid range (0,1) for the selected checks");
}

bool SuiteReport::any_failure() const {
  for (const auto& c : checks)
    if (c.status == Status::fail) return true;
  return false;
}

namespace {

using Runner = std::function<void(const SuiteConfig&, CheckOutcome&)>;

double resolve_tolerance(const SuiteConfig& cfg, const CatalogEntry& e) {
  auto it = cfg.tol_override.find(e.id);
  if (it != cfg.tol_override.end()) return it->second;
  double t = *e.tol_coeff;
  if (e.tol_scales_with_n) t *= cfg.N;
  return t;
}

Sector cfg_sector(const SuiteConfig& cfg) {
  if (cfg.g) return sector_from_g(*cfg.g, cfg.N);
  return sector_from_k(*cfg.k, cfg.N);
}

OperatorMatrix zero_like(const OperatorMatrix& a) {
  return {Matrix::Zero(a.dim(), a.dim()), a.basis};
}

// ---- algebra ----

void run_ladder_k3(const SuiteConfig& cfg, CheckOutcome& out, int sign) {
  Sector s = cfg_sector(cfg);
  GeneratorSet g = generators(s);
  const OperatorMatrix& kpm = sign > 0 ? g.Kplus : g.Kminus;
  OperatorMatrix lhs = commutator(g.K3, kpm) - Complex(sign, 0) * kpm;
  out.residual = window_defect(lhs, zero_like(lhs), Window(s.N));
}

void run_ladder_pm_interior(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  GeneratorSet g = generators(s);
  OperatorMatrix lhs = commutator(g.Kminus, g.Kplus) - Complex(2, 0) * g.K3;
  out.residual = window_defect(lhs, zero_like(lhs), Window(s.N - 1));
}

void run_ladder_pm_corner(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  GeneratorSet g = generators(s);
  OperatorMatrix lhs = commutator(g.Kminus, g.Kplus) - Complex(2, 0) * g.K3;
  const double expected = ladder_corner_defect_exact(s);
  const double actual = lhs.mat(s.N - 1, s.N - 1).real();
  out.residual = std::abs(actual - expected) / std::abs(expected);
  out.details["corner"] = actual;
  out.details["corner_exact"] = expected;
}

void run_casimir_interior(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  OperatorMatrix c = casimir(s);
  const double value = s.k * (s.k - 1.0);
  OperatorMatrix ref{Matrix::Identity(s.N, s.N) * value, c.basis};
  out.residual = window_defect(c, ref, Window(s.N - 1));
  out.details["value"] = value;
}

void run_casimir_coupling(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  const double g = s.g ? *s.g : (2.0 * s.k - 1.0) * (2.0 * s.k - 1.0) - 0.25;
  const double value = g / 4.0 - 3.0 / 16.0;
  OperatorMatrix c = casimir(s);
  OperatorMatrix ref{Matrix::Identity(s.N, s.N) * value, c.basis};
  out.residual = window_defect(c, ref, Window(s.N - 1));
  out.details["value"] = value;
  out.details["k_form"] = s.k * (s.k - 1.0);
}

void run_gamma_shift(const SuiteConfig& cfg, CheckOutcome& out, int n) {
  Sector s = cfg_sector(cfg);
  out.residual = gamma_shift_defect(s, n, Window(s.N - n));
}

void run_canonical_pair(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  out.residual = canonical_pair_defect(s, Window(s.N - 1));
}

void run_canonical_corner(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  GeneratorSet g = generators(s);
  Matrix a = Matrix::Zero(s.N, s.N);
  for (int n = 0; n + 1 < s.N; ++n)
    a(n + 1, n) = std::sqrt((n + 1.0) * (n + 2.0 * s.k)) / (n + 2.0 * s.k);
  OperatorMatrix c = commutator(g.Kminus, {std::move(a), g.Kminus.basis});
  const double expected = -(s.N - 1.0);
  const double actual = c.mat(s.N - 1, s.N - 1).real();
  out.residual = std::abs(actual - expected) / std::abs(expected);
  out.details["corner"] = actual;
}

// ---- coherent ----

void run_vacuum(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  CoherentVector v = bg_state_series(s, Complex(0, 0));
  out.residual = v.eigen_residual;
  out.details["c0"] = v.coefficients(0).real();
}

Complex coherent_z(int which) { return which == 1 ? Complex(0.5, 0) : Complex(1.0, 0.5); }

void run_series_vs_exponential(const SuiteConfig& cfg, CheckOutcome& out, int which) {
  Sector s = cfg_sector(cfg);
  const Complex z = coherent_z(which);
  CoherentVector a = bg_state_series(s, z);
  CoherentVector b = bg_state_exponential(s, z);
  double num = 0, den = 0;
  for (int i = 0; i < s.N; ++i) {
    num = std::max(num, std::abs(a.coefficients(i) - b.coefficients(i)));
    den = std::max(den, std::abs(a.coefficients(i)));
  }
  out.residual = num / std::max(den, 1e-300);
}

void run_eigen_residual(const SuiteConfig& cfg, CheckOutcome& out, int which) {
  Sector s = cfg_sector(cfg);
  const Complex z = coherent_z(which);
  CoherentVector v = bg_state_series(s, z);
  Sector half = s;
  half.N = std::max(4, s.N / 2);
  CoherentVector vh = bg_state_series(half, z);
  out.residual = v.eigen_residual;
  out.details["log10_residual"] = v.log10_eigen_residual;
  out.details["log10_residual_half_n"] = vh.log10_eigen_residual;
  const bool decreasing = v.log10_eigen_residual < vh.log10_eigen_residual;
  out.details["decreasing"] = decreasing ? 1.0 : 0.0;
  if (!decreasing) {
    out.status = Status::fail;
    out.note = "residual did not decrease from N/2";
  }
}

// ---- conformal ----

void run_conformal_algebra(const SuiteConfig& cfg, CheckOutcome& out, int which) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  ConformalDefects d = algebra_defects(t, Window(s.N - 2));
  out.residual = which == 0 ? d.hd : which == 1 ? d.kd : which == 2 ? d.hk : d.casimir;
}

void run_triple_recover(const SuiteConfig& cfg, CheckOutcome& out, bool recover_h) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  OmegaFamily f = omega_family(t, cfg.default_omega());
  const Complex om(f.omega, 0);
  OperatorMatrix lhs = recover_h ? om * (f.K3w - f.K1w) : Complex(1.0 / f.omega, 0) * (f.K3w + f.K1w);
  out.residual = window_defect(lhs, recover_h ? t.H : t.K, Window(s.N));
}

void run_family_at_unit(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  OmegaFamily f = omega_family(t, 1.0);
  GeneratorSet g = generators(s);
  out.residual = window_defect(f.K3w, g.K3, Window(s.N));
}

void run_family_su11(const SuiteConfig& cfg, CheckOutcome& out, bool ladder) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  OmegaFamily f = omega_family(t, cfg.default_omega());
  const Window w(s.N - 1);
  if (ladder) {
    OperatorMatrix l1 = commutator(f.K3w, f.Kplusw) - f.Kplusw;
    OperatorMatrix l2 = commutator(f.K3w, f.Kminusw) + f.Kminusw;
    const double r1 = window_defect_rel(commutator(f.K3w, f.Kplusw), f.Kplusw, w);
    const double r2 = window_defect_rel(commutator(f.K3w, f.Kminusw), Complex(-1, 0) * f.Kminusw, w);
    out.residual = std::max(r1, r2);
    out.details["plus_abs"] = window_defect(l1, zero_like(l1), w);
    out.details["minus_abs"] = window_defect(l2, zero_like(l2), w);
  } else {
    out.residual = window_defect_rel(commutator(f.Kminusw, f.Kplusw), Complex(2, 0) * f.K3w, w);
  }
}

void run_linear_hermitian(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  OperatorMatrix h = linear_hamiltonian(s, {0.3, 0.0, 1.0});
  out.residual = hermiticity_defect(h) / std::max(1.0, max_abs(h.mat));
  double off = 0;  // tridiagonal structure
  for (int i = 0; i < s.N; ++i)
    for (int j = 0; j < s.N; ++j)
      if (std::abs(i - j) > 1) off = std::max(off, std::abs(h.mat(i, j)));
  out.details["beyond_tridiagonal"] = off;
}

void run_classify(const SuiteConfig&, CheckOutcome& out) {
  int wrong = 0;
  wrong += classify({0.3, 0.0, 1.0}) != HamiltonianCase::case_a;
  wrong += classify({1.0, 0.0, 1.0}) != HamiltonianCase::case_b;
  wrong += classify({2.0, 0.0, 1.0}) != HamiltonianCase::unsupported;
  wrong += classify({0.3, 0.0, -1.0}) != HamiltonianCase::unsupported;
  // scale covariance
  wrong += classify({0.6, 0.0, 2.0}) != HamiltonianCase::case_a;
  wrong += classify({2.5, 0.0, 2.5}) != HamiltonianCase::case_b;
  out.residual = wrong;
}

void run_case_a_diagonal(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  SpectralCheck c = case_a_spectrum(s, {0.0, 0.0, 1.0}, std::min(10, s.N / 4));
  double dev = 0;
  for (double d : c.deviation) dev = std::max(dev, d);
  out.residual = dev;
}

void run_case_a_spectrum(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  SpectralCheck c = case_a_spectrum(s, {0.3, 0.0, 1.0}, std::min(10, s.N / 4));
  double dev = 0, conv = 0;
  for (std::size_t i = 0; i < c.deviation.size(); ++i) {
    dev = std::max(dev, c.deviation[i]);
    conv = std::max(conv, c.self_convergence[i]);
  }
  out.residual = dev;
  out.details["self_convergence"] = conv;
  out.tolerance = std::max(out.tolerance.value_or(1e-6), conv);
}

void run_energy_eigenvector(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  const double om = std::min(cfg.default_omega(), 0.5);
  const Window w(std::min(cfg.default_window(), s.N / 4));
  EnergyEigenResult r = energy_eigenvector(t, om, 1.0, w);
  Sector sh = s;
  sh.N = std::max(8, s.N / 2);
  EnergyEigenResult rh = energy_eigenvector(conformal_triple(sh), om, 1.0, w);
  out.residual = r.windowed_residual;
  out.details["residual_half_n"] = rh.windowed_residual;
  out.details["vector_norm"] = r.vector_norm;
  out.details["bg_interior_residual"] = r.bg_interior_residual;
  out.details["omega"] = om;
}

// ---- timeops ----

void run_bch(const SuiteConfig& cfg, CheckOutcome& out, bool series) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  const Window w(std::min(cfg.default_window(), s.N / 4));
  BchResult r = bch_conjugation_defect(t, cfg.default_omega(), w);
  if (series) {
    out.residual = r.series_defect;
  } else {
    out.residual = r.exp_form_rel;
    out.details["abs"] = r.exp_form_abs;
  }
}

void run_t_omega_commutator(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  const Window w(cfg.default_window());
  TimeOperator top = t_omega(t, cfg.default_omega(), w.m + 2);
  CommutatorDefect d = commutator_defect(t.H, top, w);
  out.residual = d.rel;
  out.details["abs"] = d.abs;
}

void run_t_omega_adjoint(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  const Window w(cfg.default_window());
  TimeOperator a = t_omega(t, cfg.default_omega(), w.m + 2);
  TimeOperator b = t_omega_mirror(t, cfg.default_omega(), w.m + 2);
  out.residual = window_defect_rel(adjoint(a.matrix), b.matrix, w);
}

void run_t_omega_distinct(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  const Window w(cfg.default_window());
  TimeOperator a = t_omega(t, 0.3, w.m + 2);
  TimeOperator b = t_omega(t, 0.5, w.m + 2);
  out.residual = window_defect(a.matrix, b.matrix, w);
}

void run_t_minimal_hermitian(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  TimeOperator tm = t_minimal(t);
  out.residual = hermiticity_defect(tm.matrix) / std::max(1e-300, max_abs(tm.matrix.mat));
}

void run_t_minimal_trend(const SuiteConfig& cfg, CheckOutcome& out) {
  const Window w(8);
  double prev = 0;
  bool monotone = true;
  int idx = 0;
  for (int n : {cfg.N / 4, cfg.N / 2, cfg.N}) {
    if (n < 16) continue;
    Sector s = cfg.g ? sector_from_g(*cfg.g, n) : sector_from_k(cfg.sector_k(), n);
    ConformalTriple t = conformal_triple(s);
    TimeOperator tm = t_minimal(t);
    CommutatorDefect d = commutator_defect(t.H, tm, w);
    out.details["N" + std::to_string(n)] = d.abs;
    if (idx > 0 && d.abs >= prev) monotone = false;
    prev = d.abs;
    ++idx;
  }
  out.residual = prev;
  if (!monotone) {
    out.status = Status::fail;
    out.note = "windowed defect not monotonically decreasing";
  }
}

void run_x_sandwich(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  const Window w(std::min(8, cfg.default_window()));
  TimeOperator tm = t_minimal(t);
  DefectRecord r = x_defect(t.H, tm, w);
  out.residual = r.sandwich_scaled;
  out.tolerance = r.defect_abs;
  out.details["defect_abs"] = r.defect_abs;
  out.details["sandwich_abs"] = r.sandwich_abs;
}

void run_shift_invariance(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  const Window w(std::min(8, cfg.default_window()));
  TimeOperator tm = t_minimal(t);
  OperatorMatrix shifted = tm.matrix + t.H + t.H * t.H;
  TimeOperator tshift{shifted, tm.kind, tm.params};
  CommutatorDefect d0 = commutator_defect(t.H, tm, w);
  CommutatorDefect d1 = commutator_defect(t.H, tshift, w);
  out.residual = std::abs(d1.abs - d0.abs);
  out.details["base"] = d0.abs;
  out.details["shifted"] = d1.abs;
}

void run_trace_obstruction(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  TimeOperator tm = t_minimal(t);
  const double tr = trace_obstruction(t.H, tm);
  out.residual = std::abs(tr - s.N) / s.N;
  out.details["trace_defect"] = tr;
}

void run_small_omega(const SuiteConfig& cfg, CheckOutcome& out) {
  Sector s = cfg_sector(cfg);
  ConformalTriple t = conformal_triple(s);
  const Window w(std::min(8, cfg.default_window()));
  SmallOmegaReport r = small_omega_report(t, {0.4, 0.2, 0.1}, w);
  for (std::size_t i = 0; i < r.omegas.size(); ++i) {
    const std::string tag = std::to_string(r.omegas[i]);
    out.details["herm_err_w" + tag] = r.herm_error[i];
    out.details["anti_err_w" + tag] = r.anti_error[i];
    out.details["anti_err_printed_w" + tag] = r.anti_error_printed[i];
  }
  for (std::size_t i = 0; i < r.herm_order.size(); ++i)
    out.details["herm_order_" + std::to_string(i)] = r.herm_order[i];
  out.details["minimal_floor"] = r.minimal_floor;
  out.residual = r.anti_error.back();
}

void run_k_identity(const SuiteConfig& cfg, CheckOutcome& out, bool forms) {
  const Window w(8);
  if (forms) {
    Sector s = sector_from_k(kReferenceK0, cfg.N);
    KIdentityResult r = k_identity_defect(s, w);
    out.residual = r.forms_disagree;
    out.details["k_vs_form1"] = r.k_vs_form1;
    return;
  }
  double prev = 0;
  bool monotone = true;
  int idx = 0;
  for (int n : {cfg.N / 4, cfg.N / 2, cfg.N}) {
    if (n < 16) continue;
    KIdentityResult r = k_identity_defect(sector_from_k(kReferenceK0, n), w);
    out.details["N" + std::to_string(n)] = r.k_vs_form1;
    if (idx > 0 && r.k_vs_form1 >= prev) monotone = false;
    prev = r.k_vs_form1;
    ++idx;
  }
  out.residual = prev;
  if (!monotone) {
    out.status = Status::fail;
    out.note = "K-identity residual not decreasing with N";
  }
}

void run_t_harmonic(const SuiteConfig& cfg, CheckOutcome& out, int which) {
  Sector s = sector_from_k(kReferenceK0, cfg.N);
  const Window w(std::min(8, cfg.default_window()));
  const double om = cfg.default_omega();
  if (which == 0) {  // h identity
    THarmonicResult r = t_harmonic(s, om, w);
    out.residual = r.h_identity;
    return;
  }
  if (which == 1) {  // hermiticity
    THarmonicResult r = t_harmonic(s, om, w);
    out.residual = r.hermiticity;
    return;
  }
  if (which == 2) {  // defect report with N-trend
    for (int n : {cfg.N / 4, cfg.N / 2, cfg.N}) {
      if (n < 16) continue;
      THarmonicResult r = t_harmonic(sector_from_k(kReferenceK0, n), om, w);
      out.details["plus_i_N" + std::to_string(n)] = r.defect_plus_i;
      out.details["minus_i_N" + std::to_string(n)] = r.defect_minus_i;
      out.residual = r.defect_plus_i;
      out.details["branch_distance"] = r.branch_distance;
      out.details["eigvec_cond"] = r.eigvec_cond;
    }
    return;
  }
  // omega -> 0 limit: T_h -> -T0, O(w^2)
  ConformalTriple t = conformal_triple(s);
  TimeOperator t0 = t_minimal(t);
  std::vector<double> devs;
  const std::vector<double> oms = {1e-2, 1e-3, 1e-4};
  for (double o : oms) {
    THarmonicResult r = t_harmonic(s, o, w);
    OperatorMatrix diff = r.th.matrix + t0.matrix;
    const double d = max_abs(diff.mat.topLeftCorner(w.m, w.m));
    devs.push_back(d);
    std::ostringstream key;
    key << "dev_w" << o;
    out.details[key.str()] = d;
  }
  out.details["order_12"] = std::log(devs[0] / devs[1]) / std::log(oms[0] / oms[1]);
  out.details["order_23"] = std::log(devs[1] / devs[2]) / std::log(oms[1] / oms[2]);
  out.residual = devs[1];  // the omega = 1e-3 value named by the acceptance list
}

// ---- intertwine ----

void run_overlap_methods(const SuiteConfig& cfg, CheckOutcome& out) {
  const int n = 21;
  const double k = cfg.sector_k();
  OverlapMatrix a = overlap_matrix(k, kReferenceK0, n, OverlapMethod::gamma_sum);
  OverlapMatrix b = overlap_matrix(k, kReferenceK0, n, OverlapMethod::quadrature);
  out.residual = max_abs(a.S.mat - b.S.mat);
}

void run_overlap_s00(const SuiteConfig& cfg, CheckOutcome& out) {
  const double k = cfg.sector_k();
  OverlapMatrix s = overlap_matrix(k, kReferenceK0, 8, OverlapMethod::gamma_sum);
  const double exact = overlap_s00_exact(k, kReferenceK0);
  out.residual = std::abs(s.S.mat(0, 0).real() - exact);
  out.details["s00"] = s.S.mat(0, 0).real();
  out.details["s00_exact"] = exact;
}

void run_overlap_symmetry(const SuiteConfig& cfg, CheckOutcome& out) {
  const int n = std::min(cfg.N, 64);
  const double k = cfg.sector_k();
  OverlapMatrix a = overlap_matrix(k, kReferenceK0, n, OverlapMethod::gamma_sum);
  OverlapMatrix b = overlap_matrix(kReferenceK0, k, n, OverlapMethod::gamma_sum);
  out.residual = max_abs(a.S.mat - b.S.mat.transpose().eval());
}

void run_unitary_equal_k(const SuiteConfig& cfg, CheckOutcome& out) {
  const int n = std::min(cfg.N, 64);
  const double k = cfg.sector_k();
  Intertwiner u = unitary_U(k, k, n);
  OperatorMatrix eye{Matrix::Identity(n, n), u.matrix.basis};
  out.residual = window_defect(u.matrix, eye, Window(n));
}

void run_unitarity_defect(const SuiteConfig& cfg, CheckOutcome& out) {
  Intertwiner u = unitary_U(cfg.sector_k(), kReferenceK0, cfg.N);
  out.residual = unitarity_defect(u, Window(cfg.default_window()));
}

void run_h_transport(const SuiteConfig& cfg, CheckOutcome& out) {
  const Window w(std::min(8, cfg.default_window()));
  const double k = cfg.sector_k();
  double prev = 0;
  bool monotone = true;
  int idx = 0;
  for (int n : {cfg.N / 2, cfg.N}) {
    if (n < 16) continue;
    Intertwiner u = unitary_U(k, kReferenceK0, n);
    ConformalTriple t0 = conformal_triple(sector_from_k(kReferenceK0, n));
    ConformalTriple t1 = conformal_triple(sector_from_k(k, n));
    const double r = transport_defect(u, t0.H, t1.H, w);
    out.details["N" + std::to_string(n)] = r;
    if (idx > 0 && r >= prev) monotone = false;
    prev = r;
    ++idx;
  }
  out.residual = prev;
  if (!monotone) {
    out.status = Status::fail;
    out.note = "H-transport residual not decreasing with N";
  }
}

void run_t_transport(const SuiteConfig& cfg, CheckOutcome& out) {
  const Window w(std::min(8, cfg.default_window()));
  const double k = cfg.sector_k();
  for (int n : {cfg.N / 2, cfg.N}) {
    if (n < 16) continue;
    Intertwiner u = unitary_U(k, kReferenceK0, n);
    ConformalTriple t0 = conformal_triple(sector_from_k(kReferenceK0, n));
    ConformalTriple t1 = conformal_triple(sector_from_k(k, n));
    TimeOperator m0 = t_minimal(t0), m1 = t_minimal(t1);
    const double r = transport_defect(u, m0.matrix, m1.matrix, w);
    out.details["N" + std::to_string(n)] = r;
    out.residual = r;
  }
}

void run_u1_equal_k(const SuiteConfig& cfg, CheckOutcome& out) {
  const int n = std::min(cfg.N, 64);
  const double k = cfg.sector_k();
  Intertwiner u = intertwiner_U1(k, k, n);
  OperatorMatrix eye{Matrix::Identity(n, n), u.matrix.basis};
  out.residual = window_defect(u.matrix, eye, Window(std::min(8, cfg.default_window())));
  out.details["full_defect"] = window_defect(u.matrix, eye, Window(n));
}

void run_u1_intertwining(const SuiteConfig& cfg, CheckOutcome& out) {
  const Window w(std::min(8, cfg.default_window()));
  const double k = cfg.sector_k();
  const double om = cfg.default_omega();
  for (int n : {cfg.N / 2, cfg.N}) {
    if (n < 16) continue;
    Intertwiner u1 = intertwiner_U1(k, kReferenceK0, n);
    GeneratorSet ga = generators(sector_from_k(k, n));
    GeneratorSet gb = generators(sector_from_k(kReferenceK0, n));
    Matrix lhs = 2.0 * om * ga.K3.mat * u1.matrix.mat - u1.matrix.mat * (2.0 * om * gb.K3.mat);
    const double r = max_abs(lhs.topLeftCorner(w.m, w.m));
    out.details["N" + std::to_string(n)] = r;
    out.details["u1_scale_N" + std::to_string(n)] = max_abs(u1.matrix.mat.topLeftCorner(w.m, w.m));
    out.residual = r;
  }
}

void run_t_cs(const SuiteConfig& cfg, CheckOutcome& out) {
  const Window w(std::min(8, cfg.default_window()));
  const int n = std::min(cfg.N, 200);
  TcsResult r = t_cs(cfg.sector_k(), kReferenceK0, cfg.default_omega(), n, w);
  out.residual = r.commutator_defect_abs;
  out.details["window_scale"] = r.window_scale;
  Sector s0 = sector_from_k(kReferenceK0, n);
  THarmonicResult th = t_harmonic(s0, cfg.default_omega(), w);
  out.details["th_defect_plus_i"] = th.defect_plus_i;
}

void run_fockline(const SuiteConfig& cfg, CheckOutcome& out, bool canonical) {
  const int n = cfg.N % 2 == 0 ? cfg.N : cfg.N + 1;
  FockLine f = fock_line(std::max(8, n));
  if (canonical) {
    OperatorMatrix c = commutator(f.x, f.p);
    OperatorMatrix eye{Matrix::Identity(f.N, f.N) * Complex(0, 1), f.x.basis};
    out.residual = window_defect(c, eye, Window(f.N - 1));
  } else {
    OperatorMatrix sum = f.H0 + f.K;
    Matrix ref = Matrix::Zero(f.N, f.N);
    for (int i = 0; i < f.N; ++i) ref(i, i) = i + 0.5;
    out.residual = window_defect(sum, {std::move(ref), f.x.basis}, Window(f.N - 1));
  }
}

void run_t0_forms(const SuiteConfig& cfg, CheckOutcome& out) {
  const int n = std::max(8, cfg.N % 2 == 0 ? cfg.N : cfg.N + 1);
  FockLine f = fock_line(n);
  const Window w(cfg.default_window());
  double last = 0;
  for (double pmin : {0.2, 0.5, 1.0}) {
    T0FormsResult r = t0_forms_agreement(f, pmin, w);
    std::ostringstream key;
    key << "defect_pmin" << pmin;
    out.details[key.str()] = r.forms_defect;
    out.details["subspace_dim_pmin" + std::to_string(pmin).substr(0, 3)] = r.subspace_dim;
    last = r.forms_defect;
    if (pmin == 0.5) out.details["form_b_commutator"] = r.form_b_commutator;
  }
  out.residual = last;
}

struct CheckDef {
  const char* id;
  Runner fn;
};

const std::vector<CheckDef>& runners() {
  static const std::vector<CheckDef> defs = {
      {"algebra.ladder_k3_plus", [](const SuiteConfig& c, CheckOutcome& o) { run_ladder_k3(c, o, +1); }},
      {"algebra.ladder_k3_minus", [](const SuiteConfig& c, CheckOutcome& o) { run_ladder_k3(c, o, -1); }},
      {"algebra.ladder_pm_interior", run_ladder_pm_interior},
      {"algebra.ladder_pm_corner", run_ladder_pm_corner},
      {"algebra.casimir_interior", run_casimir_interior},
      {"algebra.casimir_coupling", run_casimir_coupling},
      {"algebra.gamma_shift_n1", [](const SuiteConfig& c, CheckOutcome& o) { run_gamma_shift(c, o, 1); }},
      {"algebra.gamma_shift_n2", [](const SuiteConfig& c, CheckOutcome& o) { run_gamma_shift(c, o, 2); }},
      {"algebra.gamma_shift_n5", [](const SuiteConfig& c, CheckOutcome& o) { run_gamma_shift(c, o, 5); }},
      {"algebra.gamma_shift_n10", [](const SuiteConfig& c, CheckOutcome& o) { run_gamma_shift(c, o, 10); }},
      {"algebra.canonical_pair", run_canonical_pair},
      {"algebra.canonical_corner", run_canonical_corner},
      {"coherent.vacuum_residual", run_vacuum},
      {"coherent.series_vs_exponential.z1", [](const SuiteConfig& c, CheckOutcome& o) { run_series_vs_exponential(c, o, 1); }},
      {"coherent.series_vs_exponential.z2", [](const SuiteConfig& c, CheckOutcome& o) { run_series_vs_exponential(c, o, 2); }},
      {"coherent.eigen_residual.z1", [](const SuiteConfig& c, CheckOutcome& o) { run_eigen_residual(c, o, 1); }},
      {"coherent.eigen_residual.z2", [](const SuiteConfig& c, CheckOutcome& o) { run_eigen_residual(c, o, 2); }},
      {"conformal.algebra_hd", [](const SuiteConfig& c, CheckOutcome& o) { run_conformal_algebra(c, o, 0); }},
      {"conformal.algebra_kd", [](const SuiteConfig& c, CheckOutcome& o) { run_conformal_algebra(c, o, 1); }},
      {"conformal.algebra_hk", [](const SuiteConfig& c, CheckOutcome& o) { run_conformal_algebra(c, o, 2); }},
      {"conformal.casimir_constant", [](const SuiteConfig& c, CheckOutcome& o) { run_conformal_algebra(c, o, 3); }},
      {"conformal.triple_recover_h", [](const SuiteConfig& c, CheckOutcome& o) { run_triple_recover(c, o, true); }},
      {"conformal.triple_recover_k", [](const SuiteConfig& c, CheckOutcome& o) { run_triple_recover(c, o, false); }},
      {"conformal.family_at_unit", run_family_at_unit},
      {"conformal.family_su11_ladder", [](const SuiteConfig& c, CheckOutcome& o) { run_family_su11(c, o, true); }},
      {"conformal.family_su11_comm", [](const SuiteConfig& c, CheckOutcome& o) { run_family_su11(c, o, false); }},
      {"conformal.linear_hermitian", run_linear_hermitian},
      {"conformal.classify", run_classify},
      {"conformal.case_a_diagonal", run_case_a_diagonal},
      {"conformal.case_a_spectrum", run_case_a_spectrum},
      {"conformal.energy_eigenvector", run_energy_eigenvector},
      {"timeops.bch_series", [](const SuiteConfig& c, CheckOutcome& o) { run_bch(c, o, true); }},
      {"timeops.bch_exponential", [](const SuiteConfig& c, CheckOutcome& o) { run_bch(c, o, false); }},
      {"timeops.t_omega_commutator", run_t_omega_commutator},
      {"timeops.t_omega_adjoint", run_t_omega_adjoint},
      {"timeops.t_omega_distinct", run_t_omega_distinct},
      {"timeops.t_minimal_hermitian", run_t_minimal_hermitian},
      {"timeops.t_minimal_defect_trend", run_t_minimal_trend},
      {"timeops.x_sandwich", run_x_sandwich},
      {"timeops.shift_invariance", run_shift_invariance},
      {"timeops.trace_obstruction", run_trace_obstruction},
      {"timeops.small_omega", run_small_omega},
      {"timeops.k_identity_forms", [](const SuiteConfig& c, CheckOutcome& o) { run_k_identity(c, o, true); }},
      {"timeops.k_identity_vs_k", [](const SuiteConfig& c, CheckOutcome& o) { run_k_identity(c, o, false); }},
      {"timeops.h_harmonic_identity", [](const SuiteConfig& c, CheckOutcome& o) { run_t_harmonic(c, o, 0); }},
      {"timeops.t_harmonic_hermitian", [](const SuiteConfig& c, CheckOutcome& o) { run_t_harmonic(c, o, 1); }},
      {"timeops.t_harmonic_defect", [](const SuiteConfig& c, CheckOutcome& o) { run_t_harmonic(c, o, 2); }},
      {"timeops.t_harmonic_limit", [](const SuiteConfig& c, CheckOutcome& o) { run_t_harmonic(c, o, 3); }},
      {"intertwine.overlap_methods", run_overlap_methods},
      {"intertwine.overlap_s00", run_overlap_s00},
      {"intertwine.overlap_symmetry", run_overlap_symmetry},
      {"intertwine.unitary_equal_k", run_unitary_equal_k},
      {"intertwine.unitarity_defect", run_unitarity_defect},
      {"intertwine.h_transport", run_h_transport},
      {"intertwine.t_transport", run_t_transport},
      {"intertwine.u1_equal_k", run_u1_equal_k},
      {"intertwine.u1_intertwining", run_u1_intertwining},
      {"intertwine.t_cs_defect", run_t_cs},
      {"intertwine.fockline_canonical", [](const SuiteConfig& c, CheckOutcome& o) { run_fockline(c, o, true); }},
      {"intertwine.fockline_oscillator", [](const SuiteConfig& c, CheckOutcome& o) { run_fockline(c, o, false); }},
      {"intertwine.t0_forms", run_t0_forms},
  };
  return defs;
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  SuiteReport report;
  report.params = cfg;
  for (const auto& entry : catalog()) {
    if (cfg.suite != "all" && entry.suite != cfg.suite) continue;
    if (entry.id == "algebra.casimir_coupling" && !cfg.g) continue;
    CheckOutcome out;
    out.id = entry.id;
    out.paper_eq = entry.paper_eq;
    out.tier = entry.tier;
    out.pass_if_greater = entry.pass_if_greater;
    if (entry.tol_coeff) out.tolerance = resolve_tolerance(cfg, entry);
    out.status = entry.tier == Tier::report_only ? Status::report : Status::pass;
    const Runner* fn = nullptr;
    for (const auto& d : runners())
      if (entry.id == d.id) fn = &d.fn;
    if (!fn) throw std::logic_error("no runner registered for " + entry.id);
    try {
      (*fn)(cfg, out);
      if (out.tier != Tier::report_only && out.status != Status::fail && out.tolerance) {
        const bool ok = out.pass_if_greater ? out.residual > *out.tolerance
                                            : out.residual <= *out.tolerance;
        if (!ok) out.status = Status::fail;
      }
    } catch (const std::exception& e) {
      out.status = Status::fail;  // a diagnostic that errors out fails the suite
      out.note = e.what();
    }
    report.checks.push_back(std::move(out));
  }
  return report;
}

namespace {

nlohmann::ordered_json report_json(const SuiteReport& r) {
  nlohmann::ordered_json j;
  j["version"] = r.version;
  nlohmann::ordered_json p;
  p["suite"] = r.params.suite;
  if (r.params.k) p["k"] = *r.params.k; else p["k"] = nullptr;
  if (r.params.g) p["g"] = *r.params.g; else p["g"] = nullptr;
  p["dim"] = r.params.N;
  p["window"] = r.params.default_window();
  p["omega"] = r.params.default_omega();
  j["params"] = p;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json e;
    e["id"] = c.id;
    e["paper_eq"] = c.paper_eq;
    e["tier"] = to_string(c.tier);
    e["residual"] = c.residual;
    if (c.tolerance) e["tolerance"] = *c.tolerance; else e["tolerance"] = nullptr;
    e["status"] = to_string(c.status);
    if (!c.note.empty()) e["note"] = c.note;
    if (!c.details.empty()) {
      nlohmann::ordered_json d;
      for (const auto& [key, val] : c.details) d[key] = val;
      e["details"] = d;
    }
    checks.push_back(e);
  }
  j["checks"] = checks;
  return j;
}

}  // namespace

std::string SuiteReport::to_json() const { return report_json(*this).dump(2) + "\n"; }

std::string SuiteReport::to_csv() const {
  std::ostringstream os;
  os << "id,paper_eq,tier,residual,tolerance,status\n";
  for (const auto& c : checks) {
    os << c.id << ",\"" << c.paper_eq << "\"," << to_string(c.tier) << ','
       << format_double(c.residual) << ','
       << (c.tolerance ? format_double(*c.tolerance) : std::string("")) << ','
       << to_string(c.status) << '\n';
  }
  return os.str();
}

SweepResult sweep(const SuiteConfig& cfg, const std::string& axis,
                  const std::vector<double>& values) {
  if (values.size() < 2) throw ConfigError("sweep: need at least two axis values");
  for (std::size_t i = 1; i < values.size(); ++i)
    if ((values[i] - values[i - 1]) * (values[1] - values[0]) <= 0)
      throw ConfigError("sweep: axis values must be strictly monotone");
  if (axis != "dim" && axis != "omega") throw ConfigError("sweep: axis must be dim or omega");

  SweepResult result;
  for (double v : values) {
    SuiteConfig c = cfg;
    if (axis == "dim")
      c.N = static_cast<int>(v);
    else
      c.omega = v;
    result.reports.push_back(run_suite(c));
  }
  std::ostringstream os;
  os << "value,check_id,residual,order\n";
  for (std::size_t ci = 0; ci < result.reports.front().checks.size(); ++ci) {
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
      const CheckOutcome& c = result.reports[vi].checks[ci];
      os << format_double(values[vi]) << ',' << c.id << ',' << format_double(c.residual) << ',';
      if (c.tier == Tier::convergent && vi > 0) {
        const double r0 = result.reports[vi - 1].checks[ci].residual;
        const double r1 = c.residual;
        if (r0 > 0 && r1 > 0)
          os << format_double(std::log(r0 / r1) / std::log(values[vi] / values[vi - 1]) *
                              (axis == "dim" ? -1.0 : 1.0));
      }
      os << '\n';
    }
  }
  result.trend_csv = os.str();
  return result;
}

void export_operator(const SuiteConfig& cfg, const std::string& id, const std::string& out_path) {
  cfg.validate(false);
  const int n = cfg.N;
  auto write = [&](const OperatorMatrix& m) { write_matrix_csv_file(out_path, m); };
  auto need_omega = [&]() {
    if (!cfg.omega) throw ConfigError("export " + id + ": --omega is required");
    return *cfg.omega;
  };
  Sector s = cfg.g ? sector_from_g(*cfg.g, n) : sector_from_k(cfg.sector_k(), n);
  if (id == "K3") return write(generators(s).K3);
  if (id == "Kplus") return write(generators(s).Kplus);
  if (id == "Kminus") return write(generators(s).Kminus);
  if (id == "H") return write(conformal_triple(s).H);
  if (id == "D") return write(conformal_triple(s).D);
  if (id == "K") return write(conformal_triple(s).K);
  if (id == "T_min") return write(t_minimal(conformal_triple(s)).matrix);
  if (id == "T_omega") return write(t_omega(conformal_triple(s), need_omega()).matrix);
  if (id == "Q") return write(q_operator(s).matrix);
  if (id == "T_h") {
    THarmonicResult r = t_harmonic(s, need_omega(), Window(std::min(8, n - 1)));
    return write(r.th.matrix);
  }
  if (id == "T_CS") {
    TcsResult r = t_cs(cfg.sector_k(), kReferenceK0, need_omega(), n, Window(std::min(8, n - 1)));
    return write(r.tcs.matrix);
  }
  if (id == "S") return write(overlap_matrix(cfg.sector_k(), kReferenceK0, n, OverlapMethod::gamma_sum).S);
  if (id == "U") return write(unitary_U(cfg.sector_k(), kReferenceK0, n).matrix);
  if (id == "U1") return write(intertwiner_U1(cfg.sector_k(), kReferenceK0, n).matrix);
  if (id == "x") return write(fock_line(n % 2 ? n + 1 : n).x);
  if (id == "p") return write(fock_line(n % 2 ? n + 1 : n).p);
  throw ConfigError("unknown operator id: " + id);
}

}  // namespace vlab
