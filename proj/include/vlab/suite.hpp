#ifndef VLAB_SUITE_HPP
#define VLAB_SUITE_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vlab {

enum class Tier { exact, convergent, report_only };
enum class Status { pass, fail, report };

const char* to_string(Tier t);
const char* to_string(Status s);

/// One catalog check evaluated at a configuration.  `residual` is the
/// headline number; pass/fail applies only to exact/convergent tiers.
struct CheckOutcome {
  std::string id;
  std::string paper_eq;
  Tier tier = Tier::report_only;
  double residual = 0;
  std::optional<double> tolerance;
  bool pass_if_greater = false;  // lower-bound checks (e.g. distinctness)
  Status status = Status::report;
  std::string note;
  std::map<std::string, double> details;
};

struct SuiteConfig {
  std::optional<double> k;
  std::optional<double> g;
  int N = 128;
  std::optional<int> window;
  std::optional<double> omega;
  std::string suite = "all";
  std::map<std::string, double> tol_override;

  double sector_k() const;
  int default_window() const;
  double default_omega() const;
  void validate(bool for_suite = true) const;  // throws ConfigError on violations
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SuiteReport {
  int version = 1;
  SuiteConfig params;
  std::vector<CheckOutcome> checks;

  bool any_failure() const;
  std::string to_json() const;  // deterministic bytes for fixed config
  std::string to_csv() const;
};

/// Catalog metadata: every check id maps to exactly one entry carrying a
/// paper-equation reference, tier, and default tolerance (resolved at a
/// given dimension; some tolerances scale with N).
struct CatalogEntry {
  std::string id;
  std::string paper_eq;
  Tier tier;
  std::optional<double> tol_coeff;
  bool tol_scales_with_n = false;
  bool pass_if_greater = false;
  std::string suite;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& id);
/// Optional JSON tolerance override file: {"id": tolerance, ...}.
std::map<std::string, double> load_tolerance_overrides(const std::string& path);

SuiteReport run_suite(const SuiteConfig& cfg);

struct SweepResult {
  std::vector<SuiteReport> reports;
  std::string trend_csv;  // value, check id, residual (+ order annotation)
};

SweepResult sweep(const SuiteConfig& cfg, const std::string& axis, const std::vector<double>& values);

/// Writes the operator named by `id` (K3, Kplus, Kminus, H, D, K, T_min,
/// T_omega, Q, T_h, T_CS, S, U, U1, x, p) in matrix CSV form.
void export_operator(const SuiteConfig& cfg, const std::string& id, const std::string& out_path);

}  // namespace vlab

#endif
