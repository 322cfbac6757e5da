#include "qrobust/optimizers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>

namespace qrobust {

void ScpConfig::validate() const {
  if (!(0.0 < eta2 && eta2 < eta1 && eta1 < 1.0)) {
    throw InvalidArgument("ScpConfig: need 0 < eta2 < eta1 < 1");
  }
  if (!(gamma1 > 1.0)) throw InvalidArgument("ScpConfig: need gamma1 > 1");
  if (!(0.0 < gamma2 && gamma2 < 1.0)) {
    throw InvalidArgument("ScpConfig: need gamma2 in (0, 1)");
  }
  if (t_max < 1) throw InvalidArgument("ScpConfig: t_max must be positive");
  if (!(tol_d > 0.0)) throw InvalidArgument("ScpConfig: tol_d must be positive");
  if (!(initial_d > 0.0)) {
    throw InvalidArgument("ScpConfig: initial_d must be positive");
  }
}

AcceptanceRatio acceptance_ratio(double actual_old, double actual_new,
                                 double predicted_new) {
  const double denom = predicted_new - actual_old;
  if (std::abs(denom) < 1e-14) {
    return {0.0, true};
  }
  return {(actual_new - actual_old) / denom, false};
}

double trust_region_update(double d, double sigma, const ScpConfig& config) {
  if (sigma > config.eta1) return config.gamma1 * d;
  if (sigma < config.eta2) return config.gamma2 * d;
  return d;
}

QaoaRobustObjective::QaoaRobustObjective(const FidelityEvaluator& eval,
                                         SampleSet samples, double hessian_step)
    : eval_(eval), samples_(std::move(samples)), hessian_step_(hessian_step) {
  if (samples_.samples.empty()) {
    throw EmptySampleSet("QaoaRobustObjective: no uncertainty samples");
  }
}

std::size_t QaoaRobustObjective::parameter_count() const {
  return 2 * static_cast<std::size_t>(eval_.instance().depth);
}

std::size_t QaoaRobustObjective::scenario_count() const {
  return samples_.samples.size();
}

double QaoaRobustObjective::value(const std::vector<double>& theta,
                                  std::size_t scenario) const {
  return eval_.fidelity(theta, samples_.samples.at(scenario));
}

FidelityEval QaoaRobustObjective::eval(const std::vector<double>& theta,
                                       std::size_t scenario,
                                       bool want_hessian) const {
  FidelityEval fe = eval_.fidelity_gradient(theta, samples_.samples.at(scenario));
  if (want_hessian) {
    fe.hess_minus = negative_semidefinite_part(eval_.fidelity_hessian_fd(
        theta, samples_.samples.at(scenario), hessian_step_));
  }
  return fe;
}

namespace {

double min_value(const std::vector<FidelityEval>& evals) {
  double m = evals.front().value;
  for (const FidelityEval& e : evals) m = std::min(m, e.value);
  return m;
}

std::vector<FidelityEval> eval_all(const SampledObjective& obj,
                                   const std::vector<double>& theta,
                                   bool want_hessian) {
  std::vector<FidelityEval> out;
  out.reserve(obj.scenario_count());
  for (std::size_t i = 0; i < obj.scenario_count(); ++i) {
    out.push_back(obj.eval(theta, i, want_hessian));
  }
  return out;
}

}  // namespace

ScpResult scp_optimize(const SampledObjective& objective, const Box& theta_box,
                       const std::vector<double>& theta0,
                       const ScpConfig& config) {
  config.validate();
  if (theta0.size() != objective.parameter_count() ||
      theta0.size() != theta_box.dim()) {
    throw DimensionMismatch("scp_optimize: parameter dimension mismatch");
  }
  if (!theta_box.contains(theta0)) {
    throw InfeasibleStart("scp_optimize: initial point outside the box");
  }

  const auto t_start = std::chrono::steady_clock::now();
  const bool quadratic = config.surrogate_mode == SurrogateMode::quadratic;
  const std::size_t n = theta0.size();

  std::vector<double> theta = theta0;
  std::vector<FidelityEval> evals = eval_all(objective, theta, quadratic);
  double current_worst = min_value(evals);

  ScpResult result;
  result.theta = theta;
  result.trace.initial_worst = current_worst;
  result.trace.best_worst = current_worst;

  double d = config.initial_d;
  double last_accepted_worst = current_worst;

  for (int t = 1; t <= config.t_max; ++t) {
    SubproblemSolution sol;
    if (quadratic) {
      std::vector<QuadraticSurrogate> surrogates(evals.size());
      for (std::size_t i = 0; i < evals.size(); ++i) {
        surrogates[i].base_value = evals[i].value;
        surrogates[i].gradient = evals[i].gradient;
        surrogates[i].hess_minus =
            evals[i].hess_minus.value_or(RealMatrix(n));
      }
      sol = solve_maxmin_quadratic(surrogates, theta, theta_box,
                                   TrustRegion{d});
    } else {
      std::vector<LinearSurrogate> surrogates(evals.size());
      for (std::size_t i = 0; i < evals.size(); ++i) {
        surrogates[i] = {evals[i].value, evals[i].gradient};
      }
      sol = solve_lp(build_epigraph(surrogates, theta, theta_box,
                                    TrustRegion{d}));
    }

    std::vector<double> trial(n);
    for (std::size_t i = 0; i < n; ++i) trial[i] = theta[i] + sol.step[i];
    trial = theta_box.clip(std::move(trial));

    double actual_new = objective.value(trial, 0);
    for (std::size_t i = 1; i < objective.scenario_count(); ++i) {
      actual_new = std::min(actual_new, objective.value(trial, i));
    }

    const AcceptanceRatio ratio =
        acceptance_ratio(current_worst, actual_new, sol.value);
    const bool accepted = !ratio.degenerate && ratio.sigma > 0.0;

    if (accepted) {
      theta = std::move(trial);
      evals = eval_all(objective, theta, quadratic);
      current_worst = min_value(evals);
      if (current_worst < last_accepted_worst - 1e-12) {
        throw NumericalFailure(
            "scp_optimize: accepted iterate decreased the worst case");
      }
      last_accepted_worst = current_worst;
      if (current_worst > result.trace.best_worst) {
        result.trace.best_worst = current_worst;
        result.theta = theta;
      }
    }

    d = trust_region_update(d, ratio.sigma, config);
    result.trace.iterations.push_back({current_worst, ratio.sigma, d, accepted,
                                       ratio.degenerate});

    if (d < config.tol_d) break;
    if (ratio.sigma > 0.0 && ratio.sigma < config.tol_sigma) break;
  }

  result.trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

ScpResult scp_optimize(const FidelityEvaluator& eval,
                       const ControlVector& theta0, const SampleSet& samples,
                       const ScpConfig& config) {
  theta0.validate();
  QaoaRobustObjective objective(eval, samples, config.hessian_step);
  return scp_optimize(objective, theta0.box, theta0.angles, config);
}

void GrapeConfig::validate() const {
  if (!(learning_rate > 0.0)) {
    throw InvalidArgument("GrapeConfig: learning rate must be positive");
  }
  if (momentum < 0.0 || momentum >= 1.0) {
    throw InvalidArgument("GrapeConfig: momentum must lie in [0, 1)");
  }
  if (batch_size < 1) {
    throw InvalidArgument("GrapeConfig: batch size must be at least 1");
  }
  if (iterations < 1) {
    throw InvalidArgument("GrapeConfig: iteration count must be positive");
  }
}

GrapeResult grape_ascent(const GradObjective& objective, const Box& box,
                         const std::vector<double>& theta0,
                         const GrapeConfig& config) {
  config.validate();
  if (!box.contains(theta0)) {
    throw InfeasibleStart("grape_ascent: initial point outside the box");
  }
  const std::size_t n = theta0.size();

  GrapeResult result;
  result.value_history.reserve(config.iterations);

  std::vector<double> theta = theta0;
  std::vector<double> grad(n, 0.0);
  std::vector<double> g(n, 0.0);  // momentum accumulator
  double beta = config.learning_rate;

  result.best_theta = theta;
  result.best_value = -std::numeric_limits<double>::infinity();
  int best_iter = 0;
  double window_sum = 0.0;
  double prev_window_mean = -std::numeric_limits<double>::infinity();

  int t = 0;
  for (; t < config.iterations; ++t) {
    const double v = objective(theta, grad);
    result.value_history.push_back(v);
    if (v > result.best_value) {
      result.best_value = v;
      result.best_theta = theta;
      best_iter = t;
    }
    if (v >= config.target_value) {
      ++t;
      break;
    }
    if (config.plateau_window > 0 && t - best_iter >= config.plateau_window) {
      ++t;
      break;
    }

    if (config.decay_window > 0) {
      window_sum += v;
      if ((t + 1) % config.decay_window == 0) {
        const double mean = window_sum / config.decay_window;
        if (mean < prev_window_mean) beta *= 0.5;
        prev_window_mean = mean;
        window_sum = 0.0;
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      g[i] = grad[i] + config.momentum * g[i];
      theta[i] += beta * g[i];
    }
    theta = box.clip(std::move(theta));
  }

  result.final_theta = theta;
  result.final_value = objective(theta, grad);
  if (result.final_value > result.best_value) {
    result.best_value = result.final_value;
    result.best_theta = theta;
  }
  result.iterations_run = t;
  return result;
}

GrapeResult grape_optimize(const FidelityEvaluator& eval,
                           const ControlVector& theta0,
                           const std::vector<std::vector<double>>& deltas,
                           const GrapeConfig& config) {
  theta0.validate();
  if (deltas.empty()) {
    throw EmptySampleSet("grape_optimize: no uncertainty samples");
  }
  auto objective = [&eval, &deltas](const std::vector<double>& theta,
                                    std::vector<double>& grad) {
    double value = 0.0;
    std::fill(grad.begin(), grad.end(), 0.0);
    for (const std::vector<double>& delta : deltas) {
      const FidelityEval fe = eval.fidelity_gradient(theta, delta);
      value += fe.value;
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += fe.gradient[i];
    }
    const double inv = 1.0 / static_cast<double>(deltas.size());
    for (double& x : grad) x *= inv;
    return value * inv;
  };
  return grape_ascent(objective, theta0.box, theta0.angles, config);
}

GrapeResult bgrape_optimize(const FidelityEvaluator& eval,
                            const ControlVector& theta0, const Box& delta_box,
                            const GrapeConfig& config, std::uint64_t seed) {
  theta0.validate();
  Rng rng(seed);
  auto objective = [&eval, &delta_box, &rng, &config](
                       const std::vector<double>& theta,
                       std::vector<double>& grad) {
    double value = 0.0;
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int b = 0; b < config.batch_size; ++b) {
      const std::vector<double> delta = rng.uniform_in(delta_box);
      const FidelityEval fe = eval.fidelity_gradient(theta, delta);
      value += fe.value;
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += fe.gradient[i];
    }
    const double inv = 1.0 / static_cast<double>(config.batch_size);
    for (double& x : grad) x *= inv;
    return value * inv;
  };
  return grape_ascent(objective, theta0.box, theta0.angles, config);
}

AGrapeResult agrape_optimize(const FidelityEvaluator& eval,
                             const ControlVector& theta0, const Box& delta_box,
                             const AGrapeConfig& config) {
  theta0.validate();
  if (config.rounds < 1 || config.memory < 1) {
    throw InvalidArgument("agrape_optimize: rounds and memory must be positive");
  }

  std::deque<std::vector<double>> memory;
  memory.push_back(eval.instance().nominal_delta);

  AGrapeResult result;
  std::vector<double> theta = theta0.angles;

  for (int round = 0; round < config.rounds; ++round) {
    const std::vector<std::vector<double>> fixed(memory.begin(), memory.end());
    const GrapeResult inner = grape_optimize(
        eval, make_control_vector(theta, theta0.box), fixed, config.inner);
    theta = inner.best_theta;

    const std::vector<double> adversary = adversarial_sample(
        eval, theta, delta_box, config.refine_iters,
        config.adversarial_points_per_axis);
    memory.push_back(adversary);
    if (memory.size() > static_cast<std::size_t>(config.memory)) {
      memory.pop_front();
    }

    double worst = 2.0;
    for (const auto& delta : memory) {
      worst = std::min(worst, eval.fidelity(theta, delta));
    }
    result.memory_sizes.push_back(memory.size());
    result.round_worst_fidelity.push_back(worst);
  }

  result.theta = theta;
  result.memory.assign(memory.begin(), memory.end());
  return result;
}

}  // namespace qrobust
