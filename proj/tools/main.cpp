// solitonlab command line: catalog, analyze, verify, sweep.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "solitonlab/error.hpp"
#include "solitonlab/report.hpp"
#include "solitonlab/scenario.hpp"
#include "solitonlab/spacetime.hpp"
#include "solitonlab/suite.hpp"

namespace sl = solitonlab;

namespace {

constexpr int exit_input_error = 2;

struct OutputOptions {
  std::string format = "json";
  std::string out;
  bool no_timestamp = false;
};

void add_output_options(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--format", o.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out, "write the report to this path instead of stdout");
  cmd->add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp for byte-stable output");
}

sl::ReportOptions report_options(const OutputOptions& o) {
  sl::ReportOptions r;
  if (!o.no_timestamp) r.timestamp = sl::utc_timestamp();
  return r;
}

void write_output(const OutputOptions& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw sl::Error("cannot write '" + o.out + "'");
  f << text;
  if (!f) throw sl::Error("cannot write '" + o.out + "'");
}

sl::ReportFormat parse_format(const std::string& s) {
  return s == "text" ? sl::ReportFormat::text : sl::ReportFormat::json;
}

int run_catalog() {
  for (const sl::CatalogInfo& c : sl::catalog_listing()) {
    std::cout << c.name << "\n  " << c.description << "\n";
    if (!c.parameters.empty()) std::cout << "  parameters: " << c.parameters << "\n";
  }
  return 0;
}

int run_report(const std::string& file, sl::SuiteMode mode, const OutputOptions& o) {
  const sl::Scenario s = sl::load_scenario(file);
  for (const std::string& w : s.warnings) std::cerr << "warning: " << w << "\n";
  const sl::IdentityReport r = sl::run_suite(s, mode);
  write_output(o, sl::emit_report(r, parse_format(o.format), report_options(o)));
  return sl::exit_code(r);
}

int run_sweep(const std::string& file, const std::string& param, const std::vector<double>& values,
              const OutputOptions& o) {
  const sl::Scenario base = sl::load_scenario(file);
  std::vector<sl::IdentityReport> reports;
  int code = 0;
  for (double v : values) {
    reports.push_back(sl::run_suite(sl::with_parameter(base, param, v)));
    code = std::max(code, sl::exit_code(reports.back()));
  }
  write_output(o, sl::emit_sweep(param, values, reports, parse_format(o.format), report_options(o)));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soliton and curvature identity checks on perfect fluid spacetimes"};
  app.require_subcommand(1);

  app.add_subcommand("catalog", "list the built-in metrics");

  std::string file;
  OutputOptions analyze_out;
  auto* analyze = app.add_subcommand("analyze", "evaluate identities, solve for soliton constants");
  analyze->add_option("file", file, "scenario JSON")->required();
  add_output_options(analyze, analyze_out);

  OutputOptions verify_out;
  auto* verify = app.add_subcommand("verify", "evaluate identities only (no soliton solve)");
  verify->add_option("file", file, "scenario JSON")->required();
  add_output_options(verify, verify_out);

  OutputOptions sweep_out;
  std::string param;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "re-run a scenario over parameter values");
  sweep->add_option("file", file, "scenario JSON")->required();
  sweep->add_option("--param", param,
                    "alpha, beta, p, Lambda, mu, kappa, lambda, sigma, rho, H, h or tolerance")
      ->required();
  sweep->add_option("--values", values, "comma separated values")->required()->delimiter(',');
  add_output_options(sweep, sweep_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_input_error;
  }

  try {
    if (app.got_subcommand("catalog")) return run_catalog();
    if (analyze->parsed()) return run_report(file, sl::SuiteMode::analyze, analyze_out);
    if (verify->parsed()) return run_report(file, sl::SuiteMode::verify, verify_out);
    return run_sweep(file, param, values, sweep_out);
  } catch (const sl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input_error;
  }
}
