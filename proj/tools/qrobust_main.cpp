// Command line harness for robust bang-bang schedule optimization:
//   run      execute one experiment config and emit a JSON report
//   scan     fidelity landscape over the uncertainty box as CSV
//   table    run several configs and build a comparison table
//   selftest run the built-in verification suites
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrobust/experiment.hpp"
#include "qrobust/selfcheck.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw qrobust::ConfigInvalid("cannot write output file: " + path);
  }
  out << content;
  std::cerr << "wrote " << path << "\n";
}

int run_command(const std::string& config_path, const std::string& output) {
  qrobust::ExperimentConfig cfg =
      qrobust::parse_experiment_config(config_path);
  if (!output.empty()) cfg.output = output;
  const qrobust::RunReport report = qrobust::run_experiment(cfg);
  write_output(cfg.output, qrobust::to_json_string(report) + "\n");
  std::cerr << "best worst-case infidelity "
            << qrobust::format_double(report.best_worst_infidelity)
            << ", average " << qrobust::format_double(report.avg_infidelity)
            << ", " << qrobust::format_double(report.wall_seconds) << " s\n";
  return kExitOk;
}

int scan_command(const std::string& config_path, const std::string& output) {
  qrobust::ExperimentConfig cfg = qrobust::resolve_defaults(
      qrobust::parse_experiment_config(config_path));
  if (!output.empty()) cfg.output = output;

  const qrobust::QaoaInstance instance = qrobust::build_instance(cfg);
  std::vector<double> theta = cfg.scan_theta;
  if (theta.empty()) {
    // No explicit schedule: scan the configured optimizer's solution.
    const qrobust::RunReport report = qrobust::run_experiment(cfg);
    theta = report.final_theta;
  } else if (theta.size() != 2 * static_cast<std::size_t>(cfg.depth)) {
    throw qrobust::ConfigInvalid(
        "field `theta`: expected 2 * depth entries for the scan");
  }

  qrobust::FidelityEvaluator eval(instance);
  const auto records = qrobust::landscape_scan(
      eval, theta, cfg.delta_box, cfg.scan_points_per_axis);
  write_output(cfg.output, qrobust::scan_to_csv(records));
  return kExitOk;
}

int table_command(const std::vector<std::string>& config_paths,
                  const std::string& output) {
  std::vector<qrobust::ExperimentConfig> configs;
  configs.reserve(config_paths.size());
  for (const std::string& path : config_paths) {
    configs.push_back(qrobust::parse_experiment_config(path));
  }
  const qrobust::ComparisonTable table = qrobust::compare_table(configs);
  std::cout << table.to_text();
  if (!output.empty()) write_output(output, table.to_csv());
  for (const qrobust::TableEntry& e : table.entries) {
    if (!e.ok) {
      std::cerr << "cell failed: " << e.cell << " [" << e.optimizer
                << "]: " << e.error << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust bang-bang schedule optimization benchmarks"};
  app.require_subcommand(1);

  std::string run_config, run_output;
  CLI::App* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", run_config, "experiment config file")->required();
  run->add_option("-o,--output", run_output, "report path (default stdout)");

  std::string scan_config, scan_output;
  CLI::App* scan =
      app.add_subcommand("scan", "fidelity landscape over the uncertainty box");
  scan->add_option("config", scan_config, "experiment config file")->required();
  scan->add_option("-o,--output", scan_output, "CSV path (default stdout)");

  std::vector<std::string> table_configs;
  std::string table_output;
  CLI::App* table =
      app.add_subcommand("table", "comparison table over several configs");
  table->add_option("configs", table_configs, "experiment config files")
      ->required()
      ->expected(-1);
  table->add_option("-o,--output", table_output, "CSV path");

  CLI::App* selftest =
      app.add_subcommand("selftest", "run the built-in verification suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(run_config, run_output);
    if (scan->parsed()) return scan_command(scan_config, scan_output);
    if (table->parsed()) return table_command(table_configs, table_output);
    if (selftest->parsed()) {
      return qrobust::selfcheck::run_all(std::cout) ? kExitOk : kExitNumerical;
    }
  } catch (const qrobust::ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
