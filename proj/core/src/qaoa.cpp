#include "qrobust/qaoa.hpp"

#include <cmath>
#include <utility>

namespace qrobust {

void ControlVector::validate() const {
  if (angles.size() % 2 != 0 || angles.empty()) {
    throw DimensionMismatch("ControlVector: length must be even and positive");
  }
  if (angles.size() != box.dim()) {
    throw DimensionMismatch("ControlVector: box dimension mismatch");
  }
  if (!box.contains(angles)) {
    throw InfeasibleStart("ControlVector: component outside its interval");
  }
}

ControlVector make_control_vector(std::vector<double> angles, const Box& box) {
  ControlVector cv{std::move(angles), box};
  cv.validate();
  return cv;
}

FidelityEvaluator::FidelityEvaluator(QaoaInstance instance)
    : inst_(std::move(instance)) {}

const FidelityEvaluator::Layers& FidelityEvaluator::layers_for(
    const std::vector<double>& delta) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(delta);
  if (it == cache_.end()) {
    auto layers = std::make_unique<Layers>();
    layers->a = EvolutionOperator(inst_.h_a.build(delta));
    layers->b = EvolutionOperator(inst_.h_b.build(delta));
    layers->psi_i = inst_.psi_i(delta);
    it = cache_.emplace(delta, std::move(layers)).first;
  }
  return *it->second;
}

const EvolutionOperator& FidelityEvaluator::op_for(const Layers& layers,
                                                   std::size_t slot) const {
  return (slot % 2 == 0) ? layers.a : layers.b;
}

std::size_t FidelityEvaluator::cache_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

CVector FidelityEvaluator::propagate(const std::vector<double>& angles,
                                     const std::vector<double>& delta) const {
  if (angles.size() != 2 * static_cast<std::size_t>(inst_.depth)) {
    throw DimensionMismatch("propagate: schedule length must be 2 * depth");
  }
  const Layers& layers = layers_for(delta);
  CVector psi = layers.psi_i;
  for (std::size_t k = 0; k < angles.size(); ++k) {
    psi = op_for(layers, k).apply(angles[k], psi);
  }
  return psi;
}

double FidelityEvaluator::fidelity(const std::vector<double>& angles,
                                   const std::vector<double>& delta) const {
  const cdouble c = inner(inst_.psi_t, propagate(angles, delta));
  return std::norm(c);
}

FidelityEval FidelityEvaluator::fidelity_gradient(
    const std::vector<double>& angles, const std::vector<double>& delta) const {
  const std::size_t m = angles.size();
  if (m != 2 * static_cast<std::size_t>(inst_.depth)) {
    throw DimensionMismatch("fidelity_gradient: schedule length mismatch");
  }
  const Layers& layers = layers_for(delta);

  // Forward states φ_k = U_k ... U_1 |ψ_i>, k = 0..m.
  std::vector<CVector> forward(m + 1);
  forward[0] = layers.psi_i;
  for (std::size_t k = 0; k < m; ++k) {
    forward[k + 1] = op_for(layers, k).apply(angles[k], forward[k]);
  }

  const cdouble c = inner(inst_.psi_t, forward[m]);

  FidelityEval out;
  out.value = std::norm(c);
  out.gradient.assign(m, 0.0);

  // Backward sweep: χ_k = U_{k+1}† ... U_m† |ψ_t>, and
  // ∂c/∂θ_k = <χ_k| (-i H_k) |φ_k>.
  CVector chi = inst_.psi_t;
  for (std::size_t k = m; k-- > 0;) {
    const EvolutionOperator& op = op_for(layers, k);
    const CVector h_phi = op.hamiltonian().apply(forward[k + 1]);
    const cdouble dc = cdouble(0.0, -1.0) * inner(chi, h_phi);
    out.gradient[k] = 2.0 * (std::conj(c) * dc).real();
    chi = op.apply_inverse(angles[k], chi);
  }
  return out;
}

RealMatrix FidelityEvaluator::fidelity_hessian_fd(
    const std::vector<double>& angles, const std::vector<double>& delta,
    double step) const {
  if (step < 1e-9) {
    throw StepTooSmall("fidelity_hessian_fd: step below 1e-9");
  }
  const std::size_t m = angles.size();
  RealMatrix cols(m);
  std::vector<double> shifted = angles;
  for (std::size_t j = 0; j < m; ++j) {
    shifted[j] = angles[j] + step;
    const FidelityEval plus = fidelity_gradient(shifted, delta);
    shifted[j] = angles[j] - step;
    const FidelityEval minus = fidelity_gradient(shifted, delta);
    shifted[j] = angles[j];
    for (std::size_t i = 0; i < m; ++i) {
      cols(i, j) = (plus.gradient[i] - minus.gradient[i]) / (2.0 * step);
    }
  }
  RealMatrix hess(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c2 = 0; c2 < m; ++c2) {
      hess(r, c2) = 0.5 * (cols(r, c2) + cols(c2, r));
    }
  }
  return hess;
}

namespace {

const std::vector<double>& checked_angles(const QaoaInstance& instance,
                                          const ControlVector& theta) {
  if (theta.angles.size() != 2 * static_cast<std::size_t>(instance.depth)) {
    throw DimensionMismatch("control vector length must be 2 * depth");
  }
  return theta.angles;
}

}  // namespace

CVector propagate(const QaoaInstance& instance, const ControlVector& theta,
                  const std::vector<double>& delta) {
  return FidelityEvaluator(instance).propagate(checked_angles(instance, theta),
                                               delta);
}

double fidelity(const QaoaInstance& instance, const ControlVector& theta,
                const std::vector<double>& delta) {
  return FidelityEvaluator(instance).fidelity(checked_angles(instance, theta),
                                              delta);
}

FidelityEval fidelity_gradient(const QaoaInstance& instance,
                               const ControlVector& theta,
                               const std::vector<double>& delta) {
  return FidelityEvaluator(instance).fidelity_gradient(
      checked_angles(instance, theta), delta);
}

RealMatrix fidelity_hessian_fd(const QaoaInstance& instance,
                               const ControlVector& theta,
                               const std::vector<double>& delta, double step) {
  return FidelityEvaluator(instance).fidelity_hessian_fd(
      checked_angles(instance, theta), delta, step);
}

RealMatrix negative_semidefinite_part(const RealMatrix& h) {
  if (!h.is_symmetric(1e-9)) {
    throw NotSymmetric("negative_semidefinite_part: input is not symmetric");
  }
  const SymEigDecomposition eig = symmetric_eig(h);
  const std::size_t n = h.dim();
  RealMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = std::min(eig.eigenvalues[k], 0.0);
    if (lam == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      const double vrk = eig.eigenvectors(r, k);
      if (vrk == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        out(r, c) += lam * vrk * eig.eigenvectors(c, k);
      }
    }
  }
  // Exact symmetry for downstream checks.
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r + 1; c < n; ++c) {
      const double avg = 0.5 * (out(r, c) + out(c, r));
      out(r, c) = avg;
      out(c, r) = avg;
    }
  }
  return out;
}

}  // namespace qrobust
