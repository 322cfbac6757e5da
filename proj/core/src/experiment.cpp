#include "qrobust/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qrobust/config_file.hpp"
#include "qrobust/csv.hpp"

namespace qrobust {

namespace {

using nlohmann::json;

// Exact round-trip formatting for config echoes.
std::string format_exact(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string join_doubles(const std::vector<double>& xs, bool exact) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += exact ? format_exact(xs[i]) : format_double(xs[i]);
  }
  return out;
}

std::size_t system_delta_dim(SystemKind k) {
  switch (k) {
    case SystemKind::single_qubit: return 2;
    case SystemKind::chain_one: return 2;
    case SystemKind::chain_two: return 1;
    case SystemKind::chain_two_init_error: return 2;
  }
  return 0;
}

bool system_needs_n(SystemKind k) { return k != SystemKind::single_qubit; }

}  // namespace

std::string to_string(SystemKind k) {
  switch (k) {
    case SystemKind::single_qubit: return "single_qubit";
    case SystemKind::chain_one: return "chain_one";
    case SystemKind::chain_two: return "chain_two";
    case SystemKind::chain_two_init_error: return "chain_two_init_error";
  }
  return "?";
}

std::string to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::scp: return "scp";
    case OptimizerKind::bgrape: return "bgrape";
    case OptimizerKind::agrape: return "agrape";
    case OptimizerKind::grape_nominal: return "grape_nominal";
  }
  return "?";
}

namespace {

SystemKind parse_system(const std::string& raw) {
  if (raw == "single_qubit") return SystemKind::single_qubit;
  if (raw == "chain_one") return SystemKind::chain_one;
  if (raw == "chain_two") return SystemKind::chain_two;
  if (raw == "chain_two_init_error") return SystemKind::chain_two_init_error;
  throw ConfigInvalid("field `system`: unknown system `" + raw + "`");
}

OptimizerKind parse_optimizer(const std::string& raw) {
  if (raw == "scp") return OptimizerKind::scp;
  if (raw == "bgrape") return OptimizerKind::bgrape;
  if (raw == "agrape") return OptimizerKind::agrape;
  if (raw == "grape_nominal") return OptimizerKind::grape_nominal;
  throw ConfigInvalid("field `optimizer`: unknown optimizer `" + raw + "`");
}

class KeyReader {
public:
  explicit KeyReader(std::map<std::string, std::string> kv)
      : kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string require(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) {
      throw ConfigInvalid("missing required field `" + key + "`");
    }
    const std::string v = it->second;
    kv_.erase(it);
    return v;
  }

  bool take(const std::string& key, std::string* out) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return false;
    *out = it->second;
    kv_.erase(it);
    return true;
  }

  void take_double(const std::string& key, double* out) {
    std::string raw;
    if (take(key, &raw)) *out = parse_double_field(key, raw);
  }
  void take_int(const std::string& key, int* out) {
    std::string raw;
    if (take(key, &raw)) *out = static_cast<int>(parse_int_field(key, raw));
  }
  void take_u64(const std::string& key, std::uint64_t* out) {
    std::string raw;
    if (take(key, &raw)) {
      const long v = parse_int_field(key, raw);
      if (v < 0) throw ConfigInvalid("field `" + key + "`: must be >= 0");
      *out = static_cast<std::uint64_t>(v);
    }
  }

  void forbid(const std::string& key, const std::string& why) const {
    if (kv_.count(key)) {
      throw ConfigInvalid("field `" + key + "`: " + why);
    }
  }

  void finish() const {
    if (!kv_.empty()) {
      throw ConfigInvalid("unknown key `" + kv_.begin()->first + "`");
    }
  }

private:
  std::map<std::string, std::string> kv_;
};

ExperimentConfig parse_config_map(std::map<std::string, std::string> kv) {
  KeyReader r(std::move(kv));
  ExperimentConfig cfg;

  cfg.system = parse_system(r.require("system"));
  cfg.optimizer = parse_optimizer(r.require("optimizer"));

  // Sentinels resolved per system later.
  cfg.scp.t_max = 0;
  cfg.scp.tol_sigma = 0.0;
  cfg.grape.iterations = 0;
  cfg.agrape.rounds = 0;
  cfg.agrape.inner.iterations = 0;

  if (system_needs_n(cfg.system)) {
    r.take_int("n", &cfg.n);
    if (cfg.n == 0) throw ConfigInvalid("missing required field `n`");
  } else {
    r.forbid("n", "only applies to chain systems");
  }
  if (cfg.system == SystemKind::single_qubit) {
    r.take_double("omega_a", &cfg.omega_a);
    r.take_double("omega_b", &cfg.omega_b);
  } else {
    r.forbid("omega_a", "only applies to single_qubit");
    r.forbid("omega_b", "only applies to single_qubit");
  }
  if (cfg.system == SystemKind::chain_one) {
    r.take_double("h_plus", &cfg.h_plus);
    r.take_double("h_minus", &cfg.h_minus);
  } else {
    r.forbid("h_plus", "only applies to chain_one");
    r.forbid("h_minus", "only applies to chain_one");
  }

  const std::vector<double> lo =
      parse_double_list_field("box_lower", r.require("box_lower"));
  const std::vector<double> hi =
      parse_double_list_field("box_upper", r.require("box_upper"));
  const std::size_t want = system_delta_dim(cfg.system);
  if (lo.size() != want || hi.size() != want) {
    throw ConfigInvalid("fields `box_lower`/`box_upper`: expected " +
                        std::to_string(want) + " entries for system " +
                        to_string(cfg.system));
  }
  try {
    cfg.delta_box = Box(lo, hi);
  } catch (const Error& e) {
    throw ConfigInvalid(std::string("fields `box_lower`/`box_upper`: ") +
                        e.what());
  }

  r.take_int("depth", &cfg.depth);
  r.take_double("theta_max", &cfg.theta_max);
  r.take_int("train_points_per_axis", &cfg.train_points_per_axis);
  r.take_int("eval_points_per_axis", &cfg.eval_points_per_axis);
  r.take_u64("seed", &cfg.seed);
  r.take_int("restarts", &cfg.restarts);
  r.take_double("warm_target", &cfg.warm_target);
  r.take_int("warm_attempts", &cfg.warm_attempts);
  r.take_int("warm_iterations", &cfg.warm_iterations);
  r.take(("output"), &cfg.output);
  r.take(("label"), &cfg.label);

  r.take_double("scp_eta1", &cfg.scp.eta1);
  r.take_double("scp_eta2", &cfg.scp.eta2);
  r.take_double("scp_gamma1", &cfg.scp.gamma1);
  r.take_double("scp_gamma2", &cfg.scp.gamma2);
  r.take_int("scp_t_max", &cfg.scp.t_max);
  r.take_double("scp_tol_d", &cfg.scp.tol_d);
  r.take_double("scp_tol_sigma", &cfg.scp.tol_sigma);
  r.take_double("scp_initial_d", &cfg.scp.initial_d);
  std::string surrogate;
  if (r.take("scp_surrogate", &surrogate)) {
    if (surrogate == "linear") {
      cfg.scp.surrogate_mode = SurrogateMode::linear;
    } else if (surrogate == "quadratic") {
      cfg.scp.surrogate_mode = SurrogateMode::quadratic;
    } else {
      throw ConfigInvalid("field `scp_surrogate`: expected linear|quadratic");
    }
  }

  r.take_double("grape_learning_rate", &cfg.grape.learning_rate);
  r.take_double("grape_momentum", &cfg.grape.momentum);
  r.take_int("grape_batch_size", &cfg.grape.batch_size);
  r.take_int("grape_iterations", &cfg.grape.iterations);

  r.take_int("agrape_rounds", &cfg.agrape.rounds);
  r.take_int("agrape_memory", &cfg.agrape.memory);
  r.take_int("agrape_refine_iters", &cfg.agrape.refine_iters);
  r.take_int("agrape_inner_iterations", &cfg.agrape.inner.iterations);
  r.take_int("agrape_points_per_axis", &cfg.agrape.adversarial_points_per_axis);

  std::string theta_raw;
  if (r.take("theta", &theta_raw)) {
    cfg.scan_theta = parse_double_list_field("theta", theta_raw);
  }
  r.take_int("scan_points_per_axis", &cfg.scan_points_per_axis);

  r.finish();
  return cfg;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& path) {
  return parse_config_map(parse_key_values_file(path));
}

ExperimentConfig parse_experiment_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config_map(parse_key_values(in));
}

ExperimentConfig resolve_defaults(ExperimentConfig cfg) {
  const bool single = cfg.system == SystemKind::single_qubit;
  if (system_needs_n(cfg.system) && (cfg.n < 3 || cfg.n > 7)) {
    throw ConfigInvalid("field `n`: chain length must be in [3, 7]");
  }
  if (cfg.depth == 0) {
    switch (cfg.system) {
      case SystemKind::single_qubit: cfg.depth = 5; break;
      case SystemKind::chain_one: cfg.depth = 2 * cfg.n; break;
      case SystemKind::chain_two:
      case SystemKind::chain_two_init_error: cfg.depth = cfg.n + 1; break;
    }
  }
  if (cfg.depth < 1) throw ConfigInvalid("field `depth`: must be >= 1");
  if (!(cfg.theta_max > 0.0)) {
    throw ConfigInvalid("field `theta_max`: must be positive");
  }
  if (cfg.scp.t_max == 0) cfg.scp.t_max = single ? 500 : (cfg.system == SystemKind::chain_one ? 2000 : 20000);
  if (cfg.scp.tol_sigma == 0.0) cfg.scp.tol_sigma = single ? 1e-6 : 1e-8;
  if (cfg.grape.iterations == 0) cfg.grape.iterations = single ? 20000 : 50000;
  if (cfg.agrape.rounds == 0) {
    cfg.agrape.rounds = (cfg.system == SystemKind::chain_one) ? 25 : 15;
  }
  if (cfg.agrape.inner.iterations == 0) cfg.agrape.inner.iterations = 3000;
  cfg.agrape.inner.learning_rate = cfg.grape.learning_rate;
  cfg.agrape.inner.momentum = cfg.grape.momentum;
  cfg.agrape.inner.plateau_window = 500;
  if (cfg.restarts == 0) cfg.restarts = single ? 10 : 1;
  if (cfg.restarts < 0) throw ConfigInvalid("field `restarts`: must be >= 1");
  if (cfg.train_points_per_axis == 0) {
    cfg.train_points_per_axis = (cfg.delta_box.dim() == 1) ? 9 : 5;
  }
  if (cfg.train_points_per_axis < 1 || cfg.eval_points_per_axis < 1) {
    throw ConfigInvalid("points_per_axis fields must be >= 1");
  }
  if (cfg.warm_attempts < 1) {
    throw ConfigInvalid("field `warm_attempts`: must be >= 1");
  }
  if (cfg.warm_iterations == 0) cfg.warm_iterations = 20000;
  if (!(cfg.warm_target > 0.0 && cfg.warm_target <= 1.0)) {
    throw ConfigInvalid("field `warm_target`: must lie in (0, 1]");
  }
  if (cfg.scan_points_per_axis < 1) {
    throw ConfigInvalid("field `scan_points_per_axis`: must be >= 1");
  }
  try {
    cfg.scp.validate();
    cfg.grape.validate();
  } catch (const Error& e) {
    throw ConfigInvalid(std::string("optimizer settings: ") + e.what());
  }
  return cfg;
}

QaoaInstance build_instance(const ExperimentConfig& cfg) {
  switch (cfg.system) {
    case SystemKind::single_qubit:
      return build_single_qubit(cfg.omega_a, cfg.omega_b, cfg.depth,
                                cfg.theta_max);
    case SystemKind::chain_one:
      return build_chain_one(cfg.n, cfg.h_plus, cfg.h_minus, cfg.depth,
                             cfg.theta_max);
    case SystemKind::chain_two:
      return build_chain_two(cfg.n, cfg.depth, cfg.theta_max);
    case SystemKind::chain_two_init_error:
      return build_chain_two_init_error(cfg.n, cfg.depth, cfg.theta_max);
  }
  throw ConfigInvalid("unknown system");
}

std::map<std::string, std::string> config_echo(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["system"] = to_string(cfg.system);
  kv["optimizer"] = to_string(cfg.optimizer);
  if (system_needs_n(cfg.system)) kv["n"] = std::to_string(cfg.n);
  if (cfg.system == SystemKind::single_qubit) {
    kv["omega_a"] = format_exact(cfg.omega_a);
    kv["omega_b"] = format_exact(cfg.omega_b);
  }
  if (cfg.system == SystemKind::chain_one) {
    kv["h_plus"] = format_exact(cfg.h_plus);
    kv["h_minus"] = format_exact(cfg.h_minus);
  }
  kv["depth"] = std::to_string(cfg.depth);
  kv["theta_max"] = format_exact(cfg.theta_max);
  kv["box_lower"] = join_doubles(cfg.delta_box.lower, true);
  kv["box_upper"] = join_doubles(cfg.delta_box.upper, true);
  kv["train_points_per_axis"] = std::to_string(cfg.train_points_per_axis);
  kv["eval_points_per_axis"] = std::to_string(cfg.eval_points_per_axis);
  kv["seed"] = std::to_string(cfg.seed);
  kv["restarts"] = std::to_string(cfg.restarts);
  kv["warm_target"] = format_exact(cfg.warm_target);
  kv["warm_attempts"] = std::to_string(cfg.warm_attempts);
  kv["warm_iterations"] = std::to_string(cfg.warm_iterations);
  if (!cfg.output.empty()) kv["output"] = cfg.output;
  if (!cfg.label.empty()) kv["label"] = cfg.label;
  kv["scp_eta1"] = format_exact(cfg.scp.eta1);
  kv["scp_eta2"] = format_exact(cfg.scp.eta2);
  kv["scp_gamma1"] = format_exact(cfg.scp.gamma1);
  kv["scp_gamma2"] = format_exact(cfg.scp.gamma2);
  kv["scp_t_max"] = std::to_string(cfg.scp.t_max);
  kv["scp_tol_d"] = format_exact(cfg.scp.tol_d);
  kv["scp_tol_sigma"] = format_exact(cfg.scp.tol_sigma);
  kv["scp_initial_d"] = format_exact(cfg.scp.initial_d);
  kv["scp_surrogate"] =
      cfg.scp.surrogate_mode == SurrogateMode::linear ? "linear" : "quadratic";
  kv["grape_learning_rate"] = format_exact(cfg.grape.learning_rate);
  kv["grape_momentum"] = format_exact(cfg.grape.momentum);
  kv["grape_batch_size"] = std::to_string(cfg.grape.batch_size);
  kv["grape_iterations"] = std::to_string(cfg.grape.iterations);
  kv["agrape_rounds"] = std::to_string(cfg.agrape.rounds);
  kv["agrape_memory"] = std::to_string(cfg.agrape.memory);
  kv["agrape_refine_iters"] = std::to_string(cfg.agrape.refine_iters);
  kv["agrape_inner_iterations"] = std::to_string(cfg.agrape.inner.iterations);
  kv["agrape_points_per_axis"] =
      std::to_string(cfg.agrape.adversarial_points_per_axis);
  if (!cfg.scan_theta.empty()) kv["theta"] = join_doubles(cfg.scan_theta, true);
  kv["scan_points_per_axis"] = std::to_string(cfg.scan_points_per_axis);
  return kv;
}

namespace {

struct WarmStart {
  std::vector<double> theta;
  double value = 0.0;
  int iterations = 0;
};

// Nominal GRAPE warm start: retry from fresh random points until the target
// fidelity is reached or the attempt budget runs out; keeps the best result.
WarmStart warm_start(const FidelityEvaluator& eval, const ExperimentConfig& cfg,
                     Rng& rng) {
  const Box& theta_box = eval.instance().theta_box;
  GrapeConfig warm_cfg = cfg.grape;
  warm_cfg.iterations = cfg.warm_iterations;
  warm_cfg.target_value = cfg.warm_target;
  warm_cfg.plateau_window = 1000;

  WarmStart best;
  best.value = -1.0;
  for (int attempt = 0; attempt < cfg.warm_attempts; ++attempt) {
    const std::vector<double> theta0 = rng.uniform_in(theta_box);
    const GrapeResult res =
        grape_optimize(eval, make_control_vector(theta0, theta_box),
                       {eval.instance().nominal_delta}, warm_cfg);
    if (res.best_value > best.value) {
      best.theta = res.best_theta;
      best.value = res.best_value;
      best.iterations += res.iterations_run;
    } else {
      best.iterations += res.iterations_run;
    }
    if (best.value >= cfg.warm_target) break;
  }
  return best;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& raw_cfg) {
  const ExperimentConfig cfg = resolve_defaults(raw_cfg);
  const auto t_start = std::chrono::steady_clock::now();

  const QaoaInstance instance = build_instance(cfg);
  FidelityEvaluator eval(instance);
  const SampleSet train = sample_grid(cfg.delta_box, cfg.train_points_per_axis);
  const SampleSet grid = sample_grid(cfg.delta_box, cfg.eval_points_per_axis);

  RunReport report;
  report.config = config_echo(cfg);
  report.seed = cfg.seed;

  double best_worst_fidelity = -1.0;
  for (int r = 0; r < cfg.restarts; ++r) {
    const auto r_start = std::chrono::steady_clock::now();
    const std::uint64_t restart_seed = cfg.seed + static_cast<std::uint64_t>(r);
    Rng rng(restart_seed);

    RestartTrace trace;
    trace.seed = restart_seed;

    const WarmStart warm = warm_start(eval, cfg, rng);
    trace.warm_value = warm.value;
    trace.warm_iterations = warm.iterations;

    std::vector<double> theta = warm.theta;
    switch (cfg.optimizer) {
      case OptimizerKind::grape_nominal:
        break;
      case OptimizerKind::scp: {
        const ScpResult res = scp_optimize(
            eval, make_control_vector(theta, instance.theta_box), train,
            cfg.scp);
        theta = res.theta;
        trace.optimizer_iterations =
            static_cast<int>(res.trace.iterations.size());
        break;
      }
      case OptimizerKind::bgrape: {
        const GrapeResult res = bgrape_optimize(
            eval, make_control_vector(theta, instance.theta_box),
            cfg.delta_box, cfg.grape, rng.next_u64());
        theta = res.final_theta;
        trace.optimizer_iterations = res.iterations_run;
        break;
      }
      case OptimizerKind::agrape: {
        const AGrapeResult res = agrape_optimize(
            eval, make_control_vector(theta, instance.theta_box),
            cfg.delta_box, cfg.agrape);
        theta = res.theta;
        trace.optimizer_iterations = static_cast<int>(res.memory_sizes.size());
        break;
      }
    }

    const WorstAverage on_train = worst_and_average(eval, theta, train);
    const WorstAverage on_grid = worst_and_average(eval, theta, grid);
    trace.train_worst_fidelity = on_train.worst;
    trace.eval_worst_infidelity = 1.0 - on_grid.worst;
    trace.eval_avg_infidelity = 1.0 - on_grid.average;
    trace.theta = theta;
    trace.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      r_start)
            .count();

    // The evaluation grid contains every training point when the per-axis
    // counts nest; the grid minimum can then never exceed the training one.
    if (cfg.train_points_per_axis >= 2 && cfg.eval_points_per_axis >= 2 &&
        (cfg.eval_points_per_axis - 1) % (cfg.train_points_per_axis - 1) == 0) {
      if (on_grid.worst > on_train.worst + 1e-9) {
        throw NumericalFailure(
            "run_experiment: evaluation grid misses a training sample");
      }
    }

    report.restarts.push_back(std::move(trace));
    if (on_grid.worst > best_worst_fidelity) {
      best_worst_fidelity = on_grid.worst;
      report.best_restart = r;
      report.final_theta = theta;
    }
  }

  const RestartTrace& best = report.restarts[report.best_restart];
  report.best_worst_infidelity = best.eval_worst_infidelity;
  report.avg_infidelity = best.eval_avg_infidelity;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

std::string to_json_string(const RunReport& report) {
  json j;
  j["config"] = report.config;
  j["seed"] = report.seed;
  j["best_restart"] = report.best_restart;
  j["best_worst_infidelity"] = report.best_worst_infidelity;
  j["avg_infidelity"] = report.avg_infidelity;
  j["wall_seconds"] = report.wall_seconds;
  j["final_theta"] = report.final_theta;
  json arr = json::array();
  for (const RestartTrace& t : report.restarts) {
    json r;
    r["seed"] = t.seed;
    r["warm_value"] = t.warm_value;
    r["warm_iterations"] = t.warm_iterations;
    r["train_worst_fidelity"] = t.train_worst_fidelity;
    r["eval_worst_infidelity"] = t.eval_worst_infidelity;
    r["eval_avg_infidelity"] = t.eval_avg_infidelity;
    r["wall_seconds"] = t.wall_seconds;
    r["optimizer_iterations"] = t.optimizer_iterations;
    r["theta"] = t.theta;
    arr.push_back(std::move(r));
  }
  j["restarts"] = std::move(arr);
  return j.dump(2);
}

RunReport run_report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigInvalid(std::string("report parse error: ") + e.what());
  }
  try {
    RunReport report;
    report.config =
        j.at("config").get<std::map<std::string, std::string>>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.best_restart = j.at("best_restart").get<int>();
    report.best_worst_infidelity = j.at("best_worst_infidelity").get<double>();
    report.avg_infidelity = j.at("avg_infidelity").get<double>();
    report.wall_seconds = j.at("wall_seconds").get<double>();
    report.final_theta = j.at("final_theta").get<std::vector<double>>();
    for (const json& r : j.at("restarts")) {
      RestartTrace t;
      t.seed = r.at("seed").get<std::uint64_t>();
      t.warm_value = r.at("warm_value").get<double>();
      t.warm_iterations = r.at("warm_iterations").get<int>();
      t.train_worst_fidelity = r.at("train_worst_fidelity").get<double>();
      t.eval_worst_infidelity = r.at("eval_worst_infidelity").get<double>();
      t.eval_avg_infidelity = r.at("eval_avg_infidelity").get<double>();
      t.wall_seconds = r.at("wall_seconds").get<double>();
      t.optimizer_iterations = r.at("optimizer_iterations").get<int>();
      t.theta = r.at("theta").get<std::vector<double>>();
      report.restarts.push_back(std::move(t));
    }
    return report;
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("report structure error: ") + e.what());
  }
}

std::vector<ScanRecord> landscape_scan(const FidelityEvaluator& eval,
                                       const std::vector<double>& theta,
                                       const Box& box, int points_per_axis) {
  const SampleSet grid = sample_grid(box, points_per_axis);
  std::vector<ScanRecord> out;
  out.reserve(grid.samples.size());
  for (const std::vector<double>& delta : grid.samples) {
    ScanRecord rec;
    rec.delta = delta;
    rec.fidelity = eval.fidelity(theta, delta);
    const double infid = std::max(1.0 - rec.fidelity, 0.0);
    rec.log_infidelity =
        (infid == 0.0) ? 16.0 : std::min(16.0, -std::log10(infid));
    out.push_back(std::move(rec));
  }
  return out;
}

std::string scan_to_csv(const std::vector<ScanRecord>& records) {
  std::ostringstream ss;
  CsvWriter csv(ss);
  if (records.empty()) return ss.str();
  std::vector<std::string> header;
  for (std::size_t i = 0; i < records.front().delta.size(); ++i) {
    header.push_back("delta_" + std::to_string(i));
  }
  header.push_back("fidelity");
  header.push_back("log10_infidelity");
  csv.row(header);
  for (const ScanRecord& rec : records) {
    std::vector<std::string> row;
    for (double d : rec.delta) row.push_back(format_double(d));
    row.push_back(format_double(rec.fidelity));
    row.push_back(format_double(rec.log_infidelity));
    csv.row(row);
  }
  return ss.str();
}

namespace {

std::string cell_key(const ExperimentConfig& cfg) {
  std::ostringstream ss;
  ss << to_string(cfg.system);
  if (system_needs_n(cfg.system)) ss << " n=" << cfg.n;
  ss << " p=" << cfg.depth << " box=";
  for (std::size_t i = 0; i < cfg.delta_box.dim(); ++i) {
    if (i) ss << "x";
    ss << "[" << format_double(cfg.delta_box.lower[i]) << ","
       << format_double(cfg.delta_box.upper[i]) << "]";
  }
  if (!cfg.label.empty()) ss << " " << cfg.label;
  return ss.str();
}

}  // namespace

ComparisonTable compare_table(const std::vector<ExperimentConfig>& configs) {
  ComparisonTable table;
  for (const ExperimentConfig& raw : configs) {
    TableEntry entry;
    try {
      const ExperimentConfig cfg = resolve_defaults(raw);
      entry.cell = cell_key(cfg);
      entry.optimizer = to_string(cfg.optimizer);
      const RunReport report = run_experiment(cfg);
      entry.ok = true;
      entry.worst_infidelity = report.best_worst_infidelity;
      entry.avg_infidelity = report.avg_infidelity;
      entry.wall_seconds = report.wall_seconds;
    } catch (const std::exception& e) {
      if (entry.cell.empty()) entry.cell = "(invalid config)";
      if (entry.optimizer.empty()) entry.optimizer = to_string(raw.optimizer);
      entry.ok = false;
      entry.error = e.what();
    }
    table.entries.push_back(std::move(entry));
  }

  // Per-cell best accuracy and best timing among successful runs.
  std::set<std::string> cells;
  for (const TableEntry& e : table.entries) cells.insert(e.cell);
  for (const std::string& cell : cells) {
    double best_wc = std::numeric_limits<double>::infinity();
    double best_time = std::numeric_limits<double>::infinity();
    for (const TableEntry& e : table.entries) {
      if (!e.ok || e.cell != cell) continue;
      best_wc = std::min(best_wc, e.worst_infidelity);
      best_time = std::min(best_time, e.wall_seconds);
    }
    for (TableEntry& e : table.entries) {
      if (!e.ok || e.cell != cell) continue;
      e.best_worst = (e.worst_infidelity == best_wc);
      e.best_time = (e.wall_seconds == best_time);
    }
  }
  return table;
}

std::string ComparisonTable::to_csv() const {
  std::ostringstream ss;
  CsvWriter csv(ss);
  csv.row({"cell", "optimizer", "status", "wc_infidelity", "avg_infidelity",
           "time_s", "best_wc", "best_time"});
  for (const TableEntry& e : entries) {
    csv.row({e.cell, e.optimizer, e.ok ? "ok" : e.error,
             e.ok ? format_double(e.worst_infidelity) : "",
             e.ok ? format_double(e.avg_infidelity) : "",
             e.ok ? format_double(e.wall_seconds) : "",
             e.best_worst ? "1" : "0", e.best_time ? "1" : "0"});
  }
  return ss.str();
}

std::string ComparisonTable::to_text() const {
  // One row per cell, a (w-c, avg, time) column group per optimizer,
  // best accuracy / timing starred.
  std::vector<std::string> cells;
  std::vector<std::string> optimizers;
  for (const TableEntry& e : entries) {
    if (std::find(cells.begin(), cells.end(), e.cell) == cells.end()) {
      cells.push_back(e.cell);
    }
    if (std::find(optimizers.begin(), optimizers.end(), e.optimizer) ==
        optimizers.end()) {
      optimizers.push_back(e.optimizer);
    }
  }

  auto find_entry = [&](const std::string& cell,
                        const std::string& opt) -> const TableEntry* {
    for (const TableEntry& e : entries) {
      if (e.cell == cell && e.optimizer == opt) return &e;
    }
    return nullptr;
  };

  std::size_t cell_width = 4;
  for (const std::string& c : cells) cell_width = std::max(cell_width, c.size());

  constexpr int field = 13;
  std::ostringstream ss;
  ss << std::string(cell_width, ' ');
  for (const std::string& opt : optimizers) {
    std::ostringstream h;
    h << opt << " (w-c | avg | time s)";
    std::string hs = h.str();
    hs.resize(3 * field + 3, ' ');
    ss << " | " << hs;
  }
  ss << "\n";

  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s += std::string(w - s.size(), ' ');
    return s;
  };

  for (const std::string& cell : cells) {
    ss << pad(cell, cell_width);
    for (const std::string& opt : optimizers) {
      const TableEntry* e = find_entry(cell, opt);
      std::string wc = "-", avg = "-", time = "-";
      if (e && e->ok) {
        wc = format_double(e->worst_infidelity) + (e->best_worst ? "*" : "");
        avg = format_double(e->avg_infidelity);
        time = format_double(e->wall_seconds) + (e->best_time ? "*" : "");
      } else if (e) {
        wc = "ERR";
      }
      ss << " | " << pad(wc, field) << " " << pad(avg, field) << " "
         << pad(time, field);
    }
    ss << "\n";
  }
  return ss.str();
}

}  // namespace qrobust
