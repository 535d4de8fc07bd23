#include <fstream>

#include "nlohmann/json.hpp"
#include "vlab/suite.hpp"

namespace vlab {

const char* to_string(Tier t) {
  switch (t) {
    case Tier::exact: return "exact";
    case Tier::convergent: return "convergent";
    default: return "report_only";
  }
}

const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    default: return "report";
  }
}

// Acceptance thresholds are data: one table, overridable from JSON.
// tol_scales_with_n marks coefficients applied as tol * N.
const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"algebra.ladder_k3_plus", "Eq. (2)", Tier::exact, 1e-12, false, false, "algebra"},
      {"algebra.ladder_k3_minus", "Eq. (2)", Tier::exact, 1e-12, false, false, "algebra"},
      {"algebra.ladder_pm_interior", "Eq. (2)", Tier::exact, 1e-12, true, false, "algebra"},
      {"algebra.ladder_pm_corner", "Eq. (2)", Tier::exact, 1e-9, false, false, "algebra"},
      {"algebra.casimir_interior", "Eq. (3)", Tier::exact, 1e-10, true, false, "algebra"},
      {"algebra.casimir_coupling", "Eq. (10)", Tier::exact, 1e-10, true, false, "algebra"},
      {"algebra.gamma_shift_n1", "Eq. (6)", Tier::exact, 1e-10, false, false, "algebra"},
      {"algebra.gamma_shift_n2", "Eq. (6)", Tier::exact, 1e-10, false, false, "algebra"},
      {"algebra.gamma_shift_n5", "Eq. (6)", Tier::exact, 1e-10, false, false, "algebra"},
      {"algebra.gamma_shift_n10", "Eq. (6)", Tier::exact, 1e-10, false, false, "algebra"},
      {"algebra.canonical_pair", "Eq. (7)", Tier::exact, 1e-12, false, false, "algebra"},
      {"algebra.canonical_corner", "Eq. (7)", Tier::exact, 1e-9, false, false, "algebra"},

      {"coherent.vacuum_residual", "Eq. (4)", Tier::exact, 1e-15, false, false, "coherent"},
      {"coherent.series_vs_exponential.z1", "Eqs. (4)-(5)", Tier::exact, 1e-12, false, false, "coherent"},
      {"coherent.series_vs_exponential.z2", "Eqs. (4)-(5)", Tier::exact, 1e-12, false, false, "coherent"},
      {"coherent.eigen_residual.z1", "Eq. (4)", Tier::convergent, 1e-8, false, false, "coherent"},
      {"coherent.eigen_residual.z2", "Eq. (4)", Tier::convergent, 1e-8, false, false, "coherent"},

      {"conformal.algebra_hd", "Eq. (10)", Tier::exact, 1e-12, true, false, "conformal"},
      {"conformal.algebra_kd", "Eq. (10)", Tier::exact, 1e-12, true, false, "conformal"},
      {"conformal.algebra_hk", "Eq. (10)", Tier::exact, 1e-12, true, false, "conformal"},
      {"conformal.casimir_constant", "Eq. (10)", Tier::exact, 1e-12, true, false, "conformal"},
      {"conformal.triple_recover_h", "Eq. (11)", Tier::exact, 1e-13, true, false, "conformal"},
      {"conformal.triple_recover_k", "Eq. (11)", Tier::exact, 1e-13, true, false, "conformal"},
      {"conformal.family_at_unit", "Eq. (11)", Tier::exact, 1e-14, false, false, "conformal"},
      {"conformal.family_su11_ladder", "Eq. (11)", Tier::exact, 1e-10, false, false, "conformal"},
      {"conformal.family_su11_comm", "Eq. (11)", Tier::exact, 1e-10, false, false, "conformal"},
      {"conformal.linear_hermitian", "Eq. (1)", Tier::exact, 1e-14, false, false, "conformal"},
      {"conformal.classify", "Eq. (8)", Tier::exact, 0.5, false, false, "conformal"},
      {"conformal.case_a_diagonal", "Eq. (8)", Tier::exact, 1e-13, false, false, "conformal"},
      {"conformal.case_a_spectrum", "Eq. (8)", Tier::convergent, 1e-6, false, false, "conformal"},
      {"conformal.energy_eigenvector", "Eq. (13)", Tier::report_only, std::nullopt, false, false, "conformal"},

      {"timeops.bch_series", "Eq. (12)", Tier::exact, 1e-12, true, false, "timeops"},
      {"timeops.bch_exponential", "Eq. (12)", Tier::convergent, 1e-6, false, false, "timeops"},
      {"timeops.t_omega_commutator", "Eq. (14)", Tier::convergent, 1e-6, false, false, "timeops"},
      {"timeops.t_omega_adjoint", "Eq. (14)", Tier::exact, 1e-10, false, false, "timeops"},
      {"timeops.t_omega_distinct", "Eq. (14)", Tier::exact, 0.01, false, true, "timeops"},
      {"timeops.t_minimal_hermitian", "Eq. (16)", Tier::exact, 1e-12, false, false, "timeops"},
      {"timeops.t_minimal_defect_trend", "Eqs. (16)-(17)", Tier::convergent, std::nullopt, false, false, "timeops"},
      {"timeops.x_sandwich", "Eqs. (17)-(18)", Tier::convergent, std::nullopt, false, false, "timeops"},
      {"timeops.shift_invariance", "Eq. (15) text", Tier::exact, 1e-12, false, false, "timeops"},
      {"timeops.trace_obstruction", "Eq. (17)", Tier::exact, 1e-10, false, false, "timeops"},
      {"timeops.small_omega", "Eq. (15)", Tier::report_only, std::nullopt, false, false, "timeops"},
      {"timeops.k_identity_forms", "Eq. (23)", Tier::exact, 1e-10, false, false, "timeops"},
      {"timeops.k_identity_vs_k", "Eq. (23)", Tier::convergent, std::nullopt, false, false, "timeops"},
      {"timeops.h_harmonic_identity", "Eq. (21)", Tier::exact, 1e-12, true, false, "timeops"},
      {"timeops.t_harmonic_hermitian", "Eq. (24)", Tier::exact, 1e-12, false, false, "timeops"},
      {"timeops.t_harmonic_defect", "Eqs. (24)-(25)", Tier::report_only, std::nullopt, false, false, "timeops"},
      {"timeops.t_harmonic_limit", "Eqs. (24)-(25)", Tier::report_only, std::nullopt, false, false, "timeops"},

      {"intertwine.overlap_methods", "Eq. (20)", Tier::exact, 1e-10, false, false, "intertwine"},
      {"intertwine.overlap_s00", "Eq. (20)", Tier::exact, 1e-12, false, false, "intertwine"},
      {"intertwine.overlap_symmetry", "Eq. (20)", Tier::exact, 1e-13, false, false, "intertwine"},
      {"intertwine.unitary_equal_k", "Eq. (20)", Tier::exact, 1e-13, false, false, "intertwine"},
      {"intertwine.unitarity_defect", "Eq. (20)", Tier::convergent, 1e-6, false, false, "intertwine"},
      {"intertwine.h_transport", "Eq. (20)", Tier::convergent, std::nullopt, false, false, "intertwine"},
      {"intertwine.t_transport", "Eq. (20)", Tier::report_only, std::nullopt, false, false, "intertwine"},
      {"intertwine.u1_equal_k", "Eq. (22)", Tier::exact, 1e-10, false, false, "intertwine"},
      {"intertwine.u1_intertwining", "Eq. (22)", Tier::report_only, std::nullopt, false, false, "intertwine"},
      {"intertwine.t_cs_defect", "Eq. (26)", Tier::report_only, std::nullopt, false, false, "intertwine"},
      {"intertwine.fockline_canonical", "Eq. (19)", Tier::exact, 1e-13, true, false, "intertwine"},
      {"intertwine.fockline_oscillator", "Eq. (21)", Tier::exact, 1e-13, true, false, "intertwine"},
      {"intertwine.t0_forms", "Eq. (19)", Tier::report_only, std::nullopt, false, false, "intertwine"},
  };
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  throw std::invalid_argument("unknown catalog check id: " + id);
}

std::map<std::string, double> load_tolerance_overrides(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open tolerance catalog: " + path);
  nlohmann::json j;
  is >> j;
  std::map<std::string, double> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    catalog_entry(it.key());  // must exist
    out[it.key()] = it.value().get<double>();
  }
  return out;
}

}  // namespace vlab
