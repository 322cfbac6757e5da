#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qrobust/optimizers.hpp"

namespace qrobust {

enum class SystemKind { single_qubit, chain_one, chain_two, chain_two_init_error };
enum class OptimizerKind { scp, bgrape, agrape, grape_nominal };

std::string to_string(SystemKind k);
std::string to_string(OptimizerKind k);

struct ExperimentConfig {
  SystemKind system = SystemKind::single_qubit;
  int n = 0;  // chain systems only
  int depth = 0;
  double theta_max = 2.0;
  Box delta_box;
  int train_points_per_axis = 0;
  int eval_points_per_axis = 9;
  OptimizerKind optimizer = OptimizerKind::scp;
  std::uint64_t seed = 1;
  int restarts = 0;
  double warm_target = 0.999;
  int warm_attempts = 5;
  int warm_iterations = 0;
  std::string output;
  std::string label;

  // single-qubit nominal drives / chain-one control fields
  double omega_a = 4.0;
  double omega_b = -4.0;
  double h_plus = 4.0;
  double h_minus = -4.0;

  ScpConfig scp;
  GrapeConfig grape;  // b-GRAPE, warm start and a-GRAPE inner baseline
  AGrapeConfig agrape;

  std::vector<double> scan_theta;  // explicit schedule for `scan`
  int scan_points_per_axis = 33;

  bool operator==(const ExperimentConfig&) const = default;
};

// Parses the strict `key = value` format. Unknown keys, duplicate keys and
// keys that do not apply to the chosen system are hard errors.
ExperimentConfig parse_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config_text(const std::string& text);

// Fills every defaulted field (depth, iteration budgets, tolerances,
// restarts, sampler resolution) with its per-system value.
ExperimentConfig resolve_defaults(ExperimentConfig cfg);

// Instance described by a resolved config.
QaoaInstance build_instance(const ExperimentConfig& cfg);

// Canonical echo of a resolved config, key -> printed value.
std::map<std::string, std::string> config_echo(const ExperimentConfig& cfg);

struct RestartTrace {
  std::uint64_t seed = 0;
  double warm_value = 0.0;
  int warm_iterations = 0;
  double train_worst_fidelity = 0.0;
  double eval_worst_infidelity = 0.0;
  double eval_avg_infidelity = 0.0;
  double wall_seconds = 0.0;
  int optimizer_iterations = 0;
  std::vector<double> theta;

  bool operator==(const RestartTrace&) const = default;
};

struct RunReport {
  std::map<std::string, std::string> config;  // resolved echo
  std::uint64_t seed = 0;
  std::vector<RestartTrace> restarts;
  int best_restart = 0;
  double best_worst_infidelity = 0.0;
  double avg_infidelity = 0.0;
  double wall_seconds = 0.0;
  std::vector<double> final_theta;

  bool operator==(const RunReport&) const = default;
};

std::string to_json_string(const RunReport& report);
RunReport run_report_from_json(const std::string& text);

// Two-stage protocol: nominal GRAPE warm start to the target fidelity, then
// the selected robust optimizer over the sampled box; metrics are reported
// on the finer evaluation grid.
RunReport run_experiment(const ExperimentConfig& cfg);

struct ScanRecord {
  std::vector<double> delta;
  double fidelity = 0.0;
  double log_infidelity = 0.0;  // -log10(1 - F), capped at 16
};

std::vector<ScanRecord> landscape_scan(const FidelityEvaluator& eval,
                                       const std::vector<double>& theta,
                                       const Box& box, int points_per_axis);
std::string scan_to_csv(const std::vector<ScanRecord>& records);

struct TableEntry {
  std::string cell;  // "system n=? p=? box=?" grouping key
  std::string optimizer;
  bool ok = false;
  std::string error;
  double worst_infidelity = 0.0;
  double avg_infidelity = 0.0;
  double wall_seconds = 0.0;
  bool best_worst = false;
  bool best_time = false;
};

struct ComparisonTable {
  std::vector<TableEntry> entries;

  std::string to_csv() const;
  std::string to_text() const;  // aligned, best entries starred
};

// Runs every config, groups results into (system, box) cells and marks the
// per-cell best accuracy and timing. Failures are recorded, not fatal.
ComparisonTable compare_table(const std::vector<ExperimentConfig>& configs);

}  // namespace qrobust
