// Command-line front end: `verify` runs the verification suites and writes a
// JSON report, `table` writes matrix-element CSVs, `probe` writes the
// Gaussian trace-probe series.
//
// Exit status: 0 all checks pass, 1 a check failed, 2 usage/config error.

#include "coherent/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

coherent::Complex parse_complex(const std::string& text) {
  std::stringstream in(text);
  double re = 0.0;
  double im = 0.0;
  char comma = 0;
  in >> re;
  if (!in) throw coherent::UsageError("cannot parse complex value '" + text + "' (expected RE,IM)");
  if (in >> comma) {
    if (comma != ',' || !(in >> im))
      throw coherent::UsageError("cannot parse complex value '" + text + "' (expected RE,IM)");
  }
  return {re, im};
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw coherent::UsageError("cannot parse number '" + item + "' in list '" + text + "'");
    }
  }
  return values;
}

void print_summary(const coherent::VerificationReport& report) {
  for (const auto& c : report.checks) {
    std::printf("%s  %-42s residual=%-12.4g tol=%.3g\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.residual, c.tol);
  }
  std::printf("%zu checks, %s\n", report.checks.size(),
              report.all_pass() ? "all passed" : "FAILURES present");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent and extended coherent operator verification toolkit"};
  app.require_subcommand(1);

  coherent::SuiteConfig suite;
  std::vector<std::string> tol_args;
  std::string report_path;
  auto* verify = app.add_subcommand("verify", "Run verification suites and emit a JSON report");
  verify->add_option("--suite", suite.suites, "Suite to run (repeatable; default: all)");
  verify->add_option("--dim", suite.dim, "Fock cutoff D")->capture_default_str();
  verify->add_option("--band", suite.band, "Interior verification band B")->capture_default_str();
  verify->add_option("--tol", tol_args, "Tolerance override NAME=VALUE (repeatable)");
  verify->add_option("--seed", suite.seed, "Sampling seed")->capture_default_str();
  verify->add_option("--samples", suite.samples, "Property samples per check")->capture_default_str();
  verify->add_option("--z-radius", suite.z_radius, "Sampling radius for z")->capture_default_str();
  verify->add_option("--t-min", suite.t_min, "Lower end of the t range")->capture_default_str();
  verify->add_option("--t-max", suite.t_max, "Upper end of the t range")->capture_default_str();
  verify->add_flag("--timing", suite.timing, "Record wall time per check in the report");
  verify->add_option("--report", report_path, "Write the JSON report here ('-' for stdout)");

  std::string kind = "coherent";
  int n_max = 0;
  int m_max = 0;
  std::string z_text = "0,0";
  double t_value = 0.0;
  int table_dim = 128;
  std::string table_out;
  auto* table = app.add_subcommand("table", "Write closed-form vs exact matrix elements as CSV");
  table->add_option("--kind", kind, "coherent or extended")
      ->check(CLI::IsMember({"coherent", "extended"}))
      ->capture_default_str();
  table->add_option("--nmax", n_max, "Largest row index n")->required();
  table->add_option("--mmax", m_max, "Largest column index m")->required();
  table->add_option("--z", z_text, "Displacement RE,IM")->required();
  table->add_option("--t", t_value, "Number-operator phase t (extended only)");
  table->add_option("--dim", table_dim, "Fock cutoff for the exact oracle")->capture_default_str();
  table->add_option("--out", table_out, "Output CSV path")->required();

  double sigma = 1.0;
  std::string t_list_text;
  std::string probe_out;
  auto* probe = app.add_subcommand("probe", "Write the Gaussian trace-probe series as CSV");
  probe->add_option("--sigma", sigma, "Gaussian test-function width")->required();
  probe->add_option("--t", t_list_text, "Comma-separated t values")->required();
  probe->add_option("--out", probe_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*verify) {
      for (const auto& arg : tol_args) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos || eq == 0)
          throw coherent::UsageError("tolerance override '" + arg + "' is not NAME=VALUE");
        const auto values = parse_list(arg.substr(eq + 1));
        if (values.size() != 1) throw coherent::UsageError("tolerance override '" + arg + "' needs one value");
        suite.tol_overrides[arg.substr(0, eq)] = values.front();
      }
      coherent::validate(suite);
      const auto report = coherent::run_suites(suite);
      const std::string text = coherent::report_text(report);
      if (report_path == "-") {
        std::cout << text;
      } else {
        print_summary(report);
        if (!report_path.empty()) {
          std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
          if (!out) {
            std::cerr << "error: cannot write report to '" << report_path << "'\n";
            return kExitUsage;
          }
          out << text;
        }
      }
      return report.all_pass() ? 0 : kExitFail;
    }
    if (*table) {
      const auto table_kind =
          kind == "coherent" ? coherent::TableKind::Coherent : coherent::TableKind::Extended;
      coherent::emit_matrix_table(table_kind, n_max, m_max, parse_complex(z_text), t_value, table_out,
                                  table_dim);
      return 0;
    }
    if (*probe) {
      const int skipped = coherent::emit_probe_series(sigma, parse_list(t_list_text), probe_out);
      if (skipped > 0) std::cerr << "warning: skipped " << skipped << " t value(s) in 2 pi Z\n";
      return 0;
    }
  } catch (const coherent::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
