// Command-line front end: verification suites, convergence sweeps, and
// operator export for the SU(1,1) time-operator laboratory.
//
//   vlab verify --suite algebra --k 1 --dim 128
//   vlab sweep  --axis dim --values 32,64,128 --suite timeops --k 1.25
//   vlab export --operator K3 --k 1 --dim 4 --out k3.csv
//
// Exit codes: 0 all checks pass, 1 at least one exact/convergent-tier
// failure (report still written), 2 configuration error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "vlab/suite.hpp"

namespace {

void add_common(CLI::App* cmd, vlab::SuiteConfig& cfg, std::string& catalog_path) {
  cmd->add_option("--k", cfg.k, "Bargmann index k (exclusive with --g)");
  cmd->add_option("--g", cfg.g, "singular coupling g >= 0 (exclusive with --k)");
  cmd->add_option("--dim", cfg.N, "truncation dimension N")->required();
  cmd->add_option("--window", cfg.window, "interior window M (default min(16, N/4))");
  cmd->add_option("--omega", cfg.omega, "frequency parameter omega");
  cmd->add_option("--catalog", catalog_path, "JSON file of tolerance overrides {id: tol}");
}

int write_report(const vlab::SuiteReport& report, const std::string& path, const std::string& format) {
  const std::string body = format == "csv" ? report.to_csv() : report.to_json();
  if (path.empty()) {
    std::cout << body;
  } else {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
      std::cerr << "error: cannot write report to " << path << "\n";
      return 2;
    }
    os << body;
  }
  return report.any_failure() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical SU(1,1) time-operator verification laboratory"};
  app.require_subcommand(1);

  vlab::SuiteConfig cfg;
  std::string catalog_path, report_path, format = "json", axis, values_str, op_id, out_path;

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, cfg, catalog_path);
  verify->add_option("--suite", cfg.suite, "algebra|coherent|conformal|timeops|intertwine|all")
      ->required();
  verify->add_option("--report", report_path, "report output path (default stdout)");
  verify->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  CLI::App* sweepc = app.add_subcommand("sweep", "run a suite along a parameter axis");
  add_common(sweepc, cfg, catalog_path);
  sweepc->add_option("--suite", cfg.suite, "suite selector")->required();
  sweepc->add_option("--axis", axis, "dim|omega")->required();
  sweepc->add_option("--values", values_str, "comma-separated axis values")->required();
  sweepc->add_option("--report", report_path, "trend table output path (default stdout)");

  CLI::App* exportc = app.add_subcommand("export", "export an operator matrix as CSV");
  add_common(exportc, cfg, catalog_path);
  exportc->add_option("--operator", op_id, "operator id (K3, Kplus, ..., x, p)")->required();
  exportc->add_option("--out", out_path, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints usage
    return 2;
  }

  try {
    if (!catalog_path.empty()) cfg.tol_override = vlab::load_tolerance_overrides(catalog_path);

    if (verify->parsed()) {
      cfg.validate();
      vlab::SuiteReport report = vlab::run_suite(cfg);
      return write_report(report, report_path, format);
    }
    if (sweepc->parsed()) {
      cfg.validate();
      std::vector<double> values;
      std::stringstream ss(values_str);
      std::string tok;
      while (std::getline(ss, tok, ',')) values.push_back(std::stod(tok));
      vlab::SweepResult r = vlab::sweep(cfg, axis, values);
      if (report_path.empty()) {
        std::cout << r.trend_csv;
      } else {
        std::ofstream os(report_path, std::ios::binary);
        if (!os) throw vlab::ConfigError("cannot write " + report_path);
        os << r.trend_csv;
      }
      for (const auto& rep : r.reports)
        if (rep.any_failure()) return 1;
      return 0;
    }
    if (exportc->parsed()) {
      vlab::export_operator(cfg, op_id, out_path);
      return 0;
    }
  } catch (const vlab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
