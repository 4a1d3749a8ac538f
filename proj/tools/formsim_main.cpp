// Command-line front end: validate configs, run scenarios, compute metrics
// from exported logs, print theory reports, and emit SVG charts.
//
// Exit codes: 0 success, 1 usage error, 2 config parse error,
//             3 validation / parameter error, 4 runtime failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "formsim/formsim.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitRuntime = 4;

struct RunOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> duration;
  bool no_noise = false;
};

int load_config(const std::string& path, formsim::ScenarioConfig* cfg) {
  try {
    *cfg = formsim::load_scenario_file(path);
  } catch (const formsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}

void write_metrics_file(const formsim::Metrics& metrics, std::ostream& out) {
  char buf[32];
  for (const auto& [key, value] : metrics.values) {
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    out << key << " = " << buf << "\n";
  }
}

void write_bounds_file(const formsim::BoundReport& report, std::ostream& out) {
  char buf[32];
  for (const auto& c : report.checks) {
    std::snprintf(buf, sizeof(buf), "%.6g", c.value);
    out << (c.pass ? "PASS" : "FAIL") << "  " << c.name << " = " << buf
        << (c.is_lower_bound ? " >= " : " <= ");
    std::snprintf(buf, sizeof(buf), "%.6g", c.bound);
    out << buf << "\n";
  }
  out << (report.all_pass() ? "ALL BOUNDS PASS" : "BOUND VIOLATIONS PRESENT") << "\n";
}

int cmd_validate(const std::string& path) {
  formsim::ScenarioConfig cfg;
  if (int rc = load_config(path, &cfg)) return rc;
  const auto report = formsim::validate_scenario(cfg);
  if (report.ok()) {
    std::cout << "OK: scenario '" << cfg.name << "' is valid\n";
    try {
      const auto theory = formsim::make_theory_report(cfg.g_d, cfg.a_eff_value());
      formsim::print_theory_report(theory, std::cout);
    } catch (const std::exception& e) {
      std::cerr << "validation error: " << e.what() << "\n";
      return kExitValidation;
    }
    return 0;
  }
  std::cerr << "scenario '" << cfg.name << "' is invalid:\n";
  for (const auto& err : report.errors) std::cerr << "  - " << err << "\n";
  return kExitValidation;
}

int cmd_run(const RunOptions& opt) {
  formsim::ScenarioConfig cfg;
  if (int rc = load_config(opt.config_path, &cfg)) return rc;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.dt) cfg.dt = *opt.dt;
  if (opt.duration) cfg.duration = *opt.duration;
  if (opt.no_noise) cfg.noise = {};

  const auto report = formsim::validate_scenario(cfg);
  if (!report.ok()) {
    std::cerr << "scenario '" << cfg.name << "' is invalid:\n";
    for (const auto& err : report.errors) std::cerr << "  - " << err << "\n";
    return kExitValidation;
  }

  formsim::RunResult result;
  try {
    result = formsim::run_scenario(cfg);
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }

  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  if (ec) {
    std::cerr << "cannot create output directory '" << opt.out_dir << "': " << ec.message()
              << "\n";
    return kExitRuntime;
  }
  {
    std::ofstream log_out(opt.out_dir + "/log.csv");
    formsim::write_csv(result.log, log_out);
  }
  const formsim::Metrics metrics = formsim::summarize(result.log, cfg);
  {
    std::ofstream m_out(opt.out_dir + "/metrics.txt");
    write_metrics_file(metrics, m_out);
  }
  const auto bounds = formsim::guub_bounds(formsim::derive_gains(cfg.g_d), cfg.a_eff_value());
  const formsim::BoundReport b_report = formsim::bound_report(result.log, cfg, bounds);
  {
    std::ofstream b_out(opt.out_dir + "/bounds.txt");
    write_bounds_file(b_report, b_out);
  }

  std::cout << "scenario '" << cfg.name << "': " << result.log.row_count() << " rows";
  if (metrics.has("min_h1")) std::cout << ", min h1 = " << metrics.get("min_h1");
  if (metrics.has("min_h2")) std::cout << ", min h2 = " << metrics.get("min_h2");
  if (metrics.has("S_mean")) std::cout << ", S = " << metrics.get("S_mean");
  std::cout << ", bounds " << (b_report.all_pass() ? "pass" : "FAIL") << ", artifacts in "
            << opt.out_dir << "\n";

  if (result.aborted) {
    std::cerr << "run aborted at t = " << result.abort_time << ": " << result.abort_reason
              << " (partial log flushed)\n";
    return kExitRuntime;
  }
  return 0;
}

int cmd_report(double g_d, double a_eff) {
  try {
    const auto report = formsim::make_theory_report(g_d, a_eff);
    formsim::print_theory_report(report, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}

int cmd_metrics(const std::string& config_path, const std::string& log_path,
                const std::string& out_path) {
  formsim::ScenarioConfig cfg;
  if (int rc = load_config(config_path, &cfg)) return rc;
  std::ifstream in(log_path);
  if (!in) {
    std::cerr << "cannot open log file '" << log_path << "'\n";
    return kExitConfig;
  }
  formsim::SimLog log;
  formsim::Metrics metrics;
  try {
    log = formsim::read_csv(in);
    metrics = formsim::summarize(log, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  if (out_path.empty()) {
    write_metrics_file(metrics, std::cout);
  } else {
    std::ofstream out(out_path);
    write_metrics_file(metrics, out);
  }
  return 0;
}

int cmd_plot(const std::string& log_path, const std::vector<std::string>& columns,
             const std::string& out_path, const std::string& title) {
  std::ifstream in(log_path);
  if (!in) {
    std::cerr << "cannot open log file '" << log_path << "'\n";
    return kExitConfig;
  }
  try {
    const formsim::SimLog log = formsim::read_csv(in);
    std::ofstream out(out_path);
    formsim::write_line_chart(log, columns, out, title);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"estimator-based safety-critical formation control simulator"};
  app.require_subcommand(1);

  std::string config_path;
  auto* validate = app.add_subcommand("validate", "check a scenario config");
  validate->add_option("config", config_path, "scenario JSON file")->required();

  RunOptions run_opt;
  std::uint64_t seed_val = 0;
  double dt_val = 0.0, duration_val = 0.0;
  auto* run = app.add_subcommand("run", "run a scenario and write log/metrics/bounds");
  run->add_option("config", run_opt.config_path, "scenario JSON file")->required();
  run->add_option("-o,--out", run_opt.out_dir, "output directory (default: out)");
  auto* seed_opt = run->add_option("--seed", seed_val, "override the RNG seed");
  auto* dt_opt = run->add_option("--dt", dt_val, "override the time step [s]");
  auto* dur_opt = run->add_option("--duration", duration_val, "override the duration [s]");
  run->add_flag("--no-noise", run_opt.no_noise, "disable sensor noise");

  double g_d = -15.0, a_eff = 0.0;
  auto* report = app.add_subcommand("report", "print gains, eigenvalues, and bounds for a g_d");
  report->add_option("--g-d", g_d, "estimator design gain (< -1.5)")->required();
  report->add_option("--a-eff", a_eff, "acceleration bound for the ultimate bounds (default 0.5)");

  std::string log_path, out_path;
  auto* metrics = app.add_subcommand("metrics", "recompute metrics from an exported log");
  metrics->add_option("--config", config_path, "scenario JSON file")->required();
  metrics->add_option("--log", log_path, "log.csv produced by run")->required();
  metrics->add_option("-o,--out", out_path, "write to file instead of stdout");

  std::vector<std::string> plot_columns;
  std::string plot_title;
  auto* plot = app.add_subcommand("plot", "emit an SVG line chart of log columns");
  plot->add_option("--log", log_path, "log.csv produced by run")->required();
  plot->add_option("--columns", plot_columns, "column names")->required()->delimiter(',');
  plot->add_option("-o,--out", out_path, "output SVG path")->required();
  plot->add_option("--title", plot_title, "chart title");

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return cmd_validate(config_path);
  if (run->parsed()) {
    if (*seed_opt) run_opt.seed = seed_val;
    if (*dt_opt) run_opt.dt = dt_val;
    if (*dur_opt) run_opt.duration = duration_val;
    return cmd_run(run_opt);
  }
  if (report->parsed()) return cmd_report(g_d, a_eff > 0.0 ? a_eff : 0.5);
  if (metrics->parsed()) return cmd_metrics(config_path, log_path, out_path);
  if (plot->parsed()) return cmd_plot(log_path, plot_columns, out_path, plot_title);
  return 1;
}
