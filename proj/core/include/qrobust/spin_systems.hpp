#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qrobust/box.hpp"
#include "qrobust/linalg.hpp"

namespace qrobust {

enum class PauliAxis { x, y, z };

// I ⊗ ... ⊗ σ^axis ⊗ ... ⊗ I with the Pauli factor at 1-based slot `site`.
// Convention: site 1 is the leftmost tensor factor (most significant bit),
// σ^z = diag(1, -1), |0> = (1, 0).
CMatrix pauli_site_operator(PauliAxis axis, int site, int n_sites);

// Computational-basis state |k̄> = |0...1...0> with the excitation at 1-based
// site k of an n-site chain.
CVector basis_excitation(int site, int n_sites);

// Hamiltonian family parameterized by an uncertainty sample δ.
struct ParamHamiltonian {
  std::size_t dim = 0;
  std::function<CMatrix(const std::vector<double>&)> build;
  std::vector<double> nominal_delta;

  CMatrix nominal() const { return build(nominal_delta); }
};

// A complete control problem: two parametric Hamiltonians, a (possibly
// δ-dependent) initial state, a target state, the schedule depth and the
// per-component feasible interval for pulse durations.
struct QaoaInstance {
  std::string name;
  std::size_t dim = 0;
  ParamHamiltonian h_a;
  ParamHamiltonian h_b;
  std::function<CVector(const std::vector<double>&)> psi_i;
  CVector psi_t;
  int depth = 1;
  Box theta_box;                      // length 2 * depth
  std::vector<double> nominal_delta;  // reference uncertainty sample
  std::size_t delta_dim = 0;
};

// Single-qubit transfer: H_A = -σ^z + δ₁ σ^x, H_B = -σ^z + δ₂ σ^x with the
// uncertainty sample δ = (ω_A, ω_B) taken as the absolute drive strengths.
// The initial/target states are the ground states of -σ^z ± 2 σ^x.
QaoaInstance build_single_qubit(double omega_a = 4.0, double omega_b = -4.0,
                                int depth = 5, double theta_max = 2.0);

// Ising chain with two uncertain couplings and a tunable transverse field h;
// controls at h = h_plus / h_minus, states are ground states at h = ∓2.
QaoaInstance build_chain_one(int n_sites, double h_plus = 4.0,
                             double h_minus = -4.0, int depth = 0,
                             double theta_max = 2.0);

// Excitation-transfer chain: hopping H_A with an uncertain three-qubit term
// of strength δ, projector-style diagonal H_B, transfer |1̄> -> |N̄>.
QaoaInstance build_chain_two(int n_sites, int depth = 0, double theta_max = 2.0);

// √(1-ω₂²-ω₃²)|1̄> + ω₂|2̄> + ω₃|3̄>.
CVector initial_state_with_error(int n_sites, double omega2, double omega3);

// Same chain as build_chain_two but with uncertainty-free controls and the
// uncertainty δ = (ω₂, ω₃) moved into the prepared initial state.
QaoaInstance build_chain_two_init_error(int n_sites, int depth = 0,
                                        double theta_max = 2.0);

}  // namespace qrobust
