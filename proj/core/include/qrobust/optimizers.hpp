#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "qrobust/qaoa.hpp"
#include "qrobust/rng.hpp"
#include "qrobust/subproblem.hpp"
#include "qrobust/uncertainty.hpp"

namespace qrobust {

enum class SurrogateMode { linear, quadratic };

struct ScpConfig {
  double eta1 = 0.5;
  double eta2 = 0.1;
  double gamma1 = 2.0;
  double gamma2 = 0.2;
  int t_max = 500;
  double tol_d = 1e-6;
  double tol_sigma = 1e-6;
  double initial_d = 0.2;
  SurrogateMode surrogate_mode = SurrogateMode::linear;
  double hessian_step = 1e-4;  // quadratic mode only

  void validate() const;
};

struct AcceptanceRatio {
  double sigma = 0.0;
  bool degenerate = false;  // |predicted improvement| below 1e-14
};

// σ = (actual_new - actual_old) / (predicted_new - actual_old); a vanishing
// denominator is flagged and reported as σ = 0 (reject and shrink).
AcceptanceRatio acceptance_ratio(double actual_old, double actual_new,
                                 double predicted_new);

// γ₁ d above η₁, unchanged between η₂ and η₁, γ₂ d below η₂.
double trust_region_update(double d, double sigma, const ScpConfig& config);

struct ScpIterationRecord {
  double worst_fidelity = 0.0;  // sampled worst case at the current iterate
  double sigma = 0.0;
  double diameter = 0.0;  // after the update
  bool accepted = false;
  bool degenerate = false;
};

struct ScpTrace {
  std::vector<ScpIterationRecord> iterations;
  double initial_worst = 0.0;
  double best_worst = 0.0;
  double wall_seconds = 0.0;
};

struct ScpResult {
  std::vector<double> theta;  // accepted iterate with the best sampled worst case
  ScpTrace trace;
};

// A fixed list of scenario functions evaluated at a parameter vector; the
// robust optimizers maximize the minimum over scenarios.
class SampledObjective {
public:
  virtual ~SampledObjective() = default;
  virtual std::size_t parameter_count() const = 0;
  virtual std::size_t scenario_count() const = 0;
  virtual double value(const std::vector<double>& theta,
                       std::size_t scenario) const = 0;
  virtual FidelityEval eval(const std::vector<double>& theta,
                            std::size_t scenario, bool want_hessian) const = 0;
};

// Fidelity across a sample set as a SampledObjective.
class QaoaRobustObjective : public SampledObjective {
public:
  QaoaRobustObjective(const FidelityEvaluator& eval, SampleSet samples,
                      double hessian_step = 1e-4);

  std::size_t parameter_count() const override;
  std::size_t scenario_count() const override;
  double value(const std::vector<double>& theta,
               std::size_t scenario) const override;
  FidelityEval eval(const std::vector<double>& theta, std::size_t scenario,
                    bool want_hessian) const override;

  const SampleSet& samples() const { return samples_; }

private:
  const FidelityEvaluator& eval_;
  SampleSet samples_;
  double hessian_step_;
};

ScpResult scp_optimize(const SampledObjective& objective, const Box& theta_box,
                       const std::vector<double>& theta0,
                       const ScpConfig& config);
ScpResult scp_optimize(const FidelityEvaluator& eval,
                       const ControlVector& theta0, const SampleSet& samples,
                       const ScpConfig& config);

struct GrapeConfig {
  double learning_rate = 0.01;  // β
  double momentum = 0.9;        // λ
  int batch_size = 1;           // n_b (random-sampling variant only)
  int iterations = 20000;
  // Stop once the objective reaches this value (never by default).
  double target_value = std::numeric_limits<double>::infinity();
  // Halve β when the mean objective over the last window is below the mean
  // over the window before it; 0 disables.
  int decay_window = 500;
  // Stop when the incumbent has not improved for this many iterations;
  // 0 disables.
  int plateau_window = 0;
  double plateau_tol = 1e-12;

  void validate() const;
};

struct GrapeResult {
  std::vector<double> best_theta;
  double best_value = 0.0;
  std::vector<double> final_theta;
  double final_value = 0.0;
  std::vector<double> value_history;  // objective at the start of each iteration
  int iterations_run = 0;
};

// Objective callback: fills grad, returns the value.
using GradObjective =
    std::function<double(const std::vector<double>& theta,
                         std::vector<double>& grad)>;

// Momentum gradient ascent with componentwise projection onto the box.
GrapeResult grape_ascent(const GradObjective& objective, const Box& box,
                         const std::vector<double>& theta0,
                         const GrapeConfig& config);

// Mean fidelity over a fixed list of uncertainty samples (a single sample
// gives plain nominal GRAPE).
GrapeResult grape_optimize(const FidelityEvaluator& eval,
                           const ControlVector& theta0,
                           const std::vector<std::vector<double>>& deltas,
                           const GrapeConfig& config);

// Per iteration, draws batch_size samples uniformly from the box with the
// seeded generator and ascends the averaged gradient.
GrapeResult bgrape_optimize(const FidelityEvaluator& eval,
                            const ControlVector& theta0, const Box& delta_box,
                            const GrapeConfig& config, std::uint64_t seed);

struct AGrapeConfig {
  int rounds = 15;
  int memory = 10;  // sliding-window size s
  GrapeConfig inner;
  int refine_iters = 3;
  int adversarial_points_per_axis = 9;
};

struct AGrapeResult {
  std::vector<double> theta;  // last round's best response
  std::vector<std::size_t> memory_sizes;       // |B_t| after each round
  std::vector<std::vector<double>> memory;     // final B
  std::vector<double> round_worst_fidelity;    // min over B after each round
};

// Best-response adversarial training: alternate GRAPE on the average
// fidelity over the memory with an adversarial sample search; the memory
// starts from the nominal sample and keeps the most recent entries.
AGrapeResult agrape_optimize(const FidelityEvaluator& eval,
                             const ControlVector& theta0, const Box& delta_box,
                             const AGrapeConfig& config);

}  // namespace qrobust
