#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "qrobust/spin_systems.hpp"

namespace qrobust {

// Pulse durations (θ₁ᴬ, θ₁ᴮ, ..., θₚᴬ, θₚᴮ) with their feasible box.
struct ControlVector {
  std::vector<double> angles;
  Box box;

  void validate() const;
};

ControlVector make_control_vector(std::vector<double> angles, const Box& box);

struct FidelityEval {
  double value = 0.0;
  std::vector<double> gradient;
  std::optional<RealMatrix> hess_minus;
};

// Evaluates the schedule for one instance. Eigendecompositions of the two
// control Hamiltonians are cached per uncertainty sample δ, since the robust
// optimizers evaluate many schedules against few distinct samples.
// Pure with respect to callers; the cache is guarded for concurrent use.
class FidelityEvaluator {
public:
  explicit FidelityEvaluator(QaoaInstance instance);

  const QaoaInstance& instance() const { return inst_; }

  CVector propagate(const std::vector<double>& angles,
                    const std::vector<double>& delta) const;
  double fidelity(const std::vector<double>& angles,
                  const std::vector<double>& delta) const;
  // Value plus the analytic gradient from one forward and one backward sweep.
  FidelityEval fidelity_gradient(const std::vector<double>& angles,
                                 const std::vector<double>& delta) const;
  // Central differences of the analytic gradient, symmetrized.
  RealMatrix fidelity_hessian_fd(const std::vector<double>& angles,
                                 const std::vector<double>& delta,
                                 double step = 1e-4) const;

  std::size_t cache_size() const;

private:
  struct Layers {
    EvolutionOperator a;
    EvolutionOperator b;
    CVector psi_i;
  };
  const Layers& layers_for(const std::vector<double>& delta) const;
  const EvolutionOperator& op_for(const Layers& layers, std::size_t slot) const;

  QaoaInstance inst_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<double>, std::unique_ptr<Layers>> cache_;
};

// One-shot convenience wrappers matching the evaluator methods.
CVector propagate(const QaoaInstance& instance, const ControlVector& theta,
                  const std::vector<double>& delta);
double fidelity(const QaoaInstance& instance, const ControlVector& theta,
                const std::vector<double>& delta);
FidelityEval fidelity_gradient(const QaoaInstance& instance,
                               const ControlVector& theta,
                               const std::vector<double>& delta);
RealMatrix fidelity_hessian_fd(const QaoaInstance& instance,
                               const ControlVector& theta,
                               const std::vector<double>& delta,
                               double step = 1e-4);

// V diag(min(λ, 0)) Vᵀ of a real symmetric matrix.
RealMatrix negative_semidefinite_part(const RealMatrix& h);

}  // namespace qrobust
