#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "finslab/errors.hpp"
#include "finslab/report.hpp"
#include "finslab/suites.hpp"
#include "finslab/version.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string metric;
  std::string psi;
  std::vector<std::string> params;
  int n = -1;
  int samples = -1;
  long long seed = -1;
  std::vector<double> r_range;
  double tolerance_zero = -1.0;
  double threshold_nonzero = -1.0;
  std::string k1;
  std::string c;
  std::string k_fn;
  std::string k2_fn;
  std::string out;
  std::string format;
  int threads = 1;
};

void add_run_options(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_path, "JSON config file (CLI flags override)");
  cmd->add_option("--metric", opt.metric, "catalog metric name");
  cmd->add_option("--psi", opt.psi, "inline psi(r,s) expression");
  cmd->add_option("--param", opt.params, "expression parameter name=value (repeatable)");
  cmd->add_option("--n", opt.n, "dimension (2..5)");
  cmd->add_option("--samples", opt.samples, "sample count");
  cmd->add_option("--seed", opt.seed, "RNG seed");
  cmd->add_option("--r-range", opt.r_range, "sampling radii [r_min r_max]")->expected(2);
  cmd->add_option("--tolerance-zero", opt.tolerance_zero, "zero-verdict tolerance");
  cmd->add_option("--threshold-nonzero", opt.threshold_nonzero, "nonzero-verdict threshold");
  cmd->add_option("--k1", opt.k1, "k1 constant or 'scan'");
  cmd->add_option("--c", opt.c, "isotropy constant or 'scan'");
  cmd->add_option("--k-fn", opt.k_fn, "k(r) expression");
  cmd->add_option("--k2-fn", opt.k2_fn, "k2(r) expression");
  cmd->add_option("--out", opt.out, "output path (default stdout)");
  cmd->add_option("--format", opt.format, "json or csv");
  cmd->add_option("--threads", opt.threads, "worker threads (does not affect report bytes)");
}

void parse_scan_or_number(const std::string& text, const char* field, bool* scan, double* value) {
  if (text == "scan") {
    *scan = true;
    *value = 0.0;
    return;
  }
  try {
    std::size_t used = 0;
    *value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    *scan = false;
  } catch (const std::exception&) {
    throw finslab::ConfigError(finslab::ConfigCode::bad_constant,
                               std::string(field) + " must be a number or 'scan'");
  }
}

finslab::RunConfig build_config(const CliOptions& opt, const std::string& suite) {
  finslab::RunConfig cfg;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in)
      throw finslab::ConfigError(finslab::ConfigCode::io_error,
                                 "cannot read config file '" + opt.config_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    cfg = finslab::parse_config(buf.str());
  }
  if (!opt.metric.empty()) {
    cfg.metric = opt.metric;
    cfg.psi.clear();
  }
  if (!opt.psi.empty()) {
    cfg.psi = opt.psi;
    cfg.metric.clear();
  }
  for (const std::string& p : opt.params) {
    auto eq = p.find('=');
    if (eq == std::string::npos)
      throw finslab::ConfigError(finslab::ConfigCode::bad_field,
                                 "--param expects name=value, got '" + p + "'");
    cfg.params[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
  }
  if (opt.n >= 0) cfg.n = opt.n;
  if (opt.samples >= 0) cfg.samples = opt.samples;
  if (opt.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed);
  if (!opt.r_range.empty()) cfg.r_range = {opt.r_range[0], opt.r_range[1]};
  if (opt.tolerance_zero > 0.0) cfg.tolerance_zero = opt.tolerance_zero;
  if (opt.threshold_nonzero > 0.0) cfg.threshold_nonzero = opt.threshold_nonzero;
  if (!opt.k1.empty()) parse_scan_or_number(opt.k1, "k1", &cfg.k1_scan, &cfg.k1_value);
  if (!opt.c.empty()) parse_scan_or_number(opt.c, "c", &cfg.c_scan, &cfg.c_value);
  if (!opt.k_fn.empty()) cfg.k_fn = opt.k_fn;
  if (!opt.k2_fn.empty()) cfg.k2_fn = opt.k2_fn;
  if (!opt.format.empty()) cfg.format = opt.format;
  cfg.suites = {suite};
  finslab::validate_config(cfg);
  return cfg;
}

int run_suite_command(const CliOptions& opt, const std::string& suite) {
  finslab::RunConfig cfg = build_config(opt, suite);
  auto start = std::chrono::steady_clock::now();
  finslab::Report report = finslab::run_suites(cfg, {opt.threads});
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);

  std::string body =
      cfg.format == "csv" ? finslab::report_to_csv(report) : finslab::report_to_json(report);
  if (opt.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(opt.out, std::ios::binary);
    if (!out)
      throw finslab::ConfigError(finslab::ConfigCode::io_error,
                                 "cannot write '" + opt.out + "'");
    out << body;
  }
  // Timing goes to stderr so report bytes stay config-determined.
  std::cerr << "finslab: " << suite << " finished in " << elapsed.count() << " s\n";
  return report.exit_code;
}

int run_catalog() {
  for (const auto& entry : finslab::catalog_listing())
    std::cout << entry.name << "\t" << entry.formula << "\t" << entry.domain << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification lab for spherically symmetric Finsler metrics"};
  app.set_version_flag("--version", finslab::kToolVersion);
  app.require_subcommand(1);

  CliOptions opt;
  CLI::App* classify = app.add_subcommand("classify", "flag verdicts for one metric");
  CLI::App* validate = app.add_subcommand("validate", "closed forms vs jet oracles");
  CLI::App* rigidity = app.add_subcommand("rigidity", "PF+DF / isotropic-E rigidity chain");
  CLI::App* catalog = app.add_subcommand("catalog", "list built-in profiles");
  add_run_options(classify, opt);
  add_run_options(validate, opt);
  add_run_options(rigidity, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (catalog->parsed()) return run_catalog();
    if (classify->parsed()) return run_suite_command(opt, "classify");
    if (validate->parsed()) return run_suite_command(opt, "validate");
    if (rigidity->parsed()) return run_suite_command(opt, "rigidity");
  } catch (const finslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const finslab::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
