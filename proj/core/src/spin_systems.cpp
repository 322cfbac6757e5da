#include "qrobust/spin_systems.hpp"

#include <cmath>

namespace qrobust {

namespace {

constexpr int kMaxSites = 8;

void check_chain_length(int n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites) {
    throw InvalidArgument("chain length must be between 1 and 8");
  }
}

std::size_t chain_dim(int n_sites) { return std::size_t{1} << n_sites; }

// Bit mask of 1-based site k; site 1 is the most significant bit.
std::size_t site_mask(int site, int n_sites) {
  return std::size_t{1} << (n_sites - site);
}

}  // namespace

CMatrix pauli_site_operator(PauliAxis axis, int site, int n_sites) {
  check_chain_length(n_sites);
  if (site < 1 || site > n_sites) {
    throw SiteOutOfRange("pauli_site_operator: site index outside the chain");
  }
  const std::size_t dim = chain_dim(n_sites);
  const std::size_t mask = site_mask(site, n_sites);
  CMatrix op(dim);
  for (std::size_t b = 0; b < dim; ++b) {
    const bool bit_set = (b & mask) != 0;
    switch (axis) {
      case PauliAxis::z:
        op(b, b) = bit_set ? -1.0 : 1.0;
        break;
      case PauliAxis::x:
        op(b ^ mask, b) = 1.0;
        break;
      case PauliAxis::y:
        // σ^y |0> = i |1>,  σ^y |1> = -i |0>
        op(b ^ mask, b) = bit_set ? cdouble(0.0, -1.0) : cdouble(0.0, 1.0);
        break;
    }
  }
  return op;
}

CVector basis_excitation(int site, int n_sites) {
  check_chain_length(n_sites);
  if (site < 1 || site > n_sites) {
    throw SiteOutOfRange("basis_excitation: site index outside the chain");
  }
  CVector v(chain_dim(n_sites));
  v[site_mask(site, n_sites)] = 1.0;
  return v;
}

QaoaInstance build_single_qubit(double omega_a, double omega_b, int depth,
                                double theta_max) {
  if (depth < 1) throw InvalidArgument("depth must be at least 1");
  if (theta_max <= 0.0) throw InvalidArgument("theta_max must be positive");

  const CMatrix sz = pauli_site_operator(PauliAxis::z, 1, 1);
  const CMatrix sx = pauli_site_operator(PauliAxis::x, 1, 1);

  auto drive = [sz, sx](double omega) {
    CMatrix h(2);  // -σ^z + ω σ^x
    for (std::size_t r = 0; r < 2; ++r) {
      for (std::size_t c = 0; c < 2; ++c) {
        h(r, c) = -sz(r, c) + omega * sx(r, c);
      }
    }
    return h;
  };

  QaoaInstance inst;
  inst.name = "single_qubit";
  inst.dim = 2;
  inst.delta_dim = 2;
  inst.nominal_delta = {omega_a, omega_b};
  inst.h_a = ParamHamiltonian{
      2, [drive](const std::vector<double>& d) { return drive(d.at(0)); },
      inst.nominal_delta};
  inst.h_b = ParamHamiltonian{
      2, [drive](const std::vector<double>& d) { return drive(d.at(1)); },
      inst.nominal_delta};

  const CVector psi_i = ground_state(drive(2.0));   // ground of -σ^z + 2σ^x
  const CVector psi_t = ground_state(drive(-2.0));  // ground of -σ^z - 2σ^x
  inst.psi_i = [psi_i](const std::vector<double>&) { return psi_i; };
  inst.psi_t = psi_t;
  inst.depth = depth;
  inst.theta_box = Box::uniform(2 * static_cast<std::size_t>(depth), 0.0, theta_max);
  return inst;
}

namespace {

// Ising chain with two uncertain leading couplings and transverse field h.
CMatrix chain_one_hamiltonian(int n, double h, double omega1, double omega2) {
  const std::size_t dim = chain_dim(n);
  CMatrix ham(dim);
  for (int j = 1; j < n; ++j) {
    const CMatrix zz = product(pauli_site_operator(PauliAxis::z, j, n),
                               pauli_site_operator(PauliAxis::z, j + 1, n));
    double coupling = -1.0;
    if (j == 1) coupling = -(1.0 + omega1);
    if (j == 2) coupling = -(1.0 + omega2);
    ham.add_scaled(zz, coupling);
  }
  for (int j = 1; j <= n; ++j) {
    ham.add_scaled(pauli_site_operator(PauliAxis::z, j, n), -1.0);
    ham.add_scaled(pauli_site_operator(PauliAxis::x, j, n), -h);
  }
  return ham;
}

}  // namespace

QaoaInstance build_chain_one(int n_sites, double h_plus, double h_minus,
                             int depth, double theta_max) {
  if (n_sites < 3 || n_sites > 7) {
    throw InvalidArgument("build_chain_one: chain length must be in [3, 7]");
  }
  if (depth == 0) depth = 2 * n_sites;
  if (depth < 1) throw InvalidArgument("depth must be at least 1");

  QaoaInstance inst;
  inst.name = "chain_one";
  inst.dim = chain_dim(n_sites);
  inst.delta_dim = 2;
  inst.nominal_delta = {0.0, 0.0};
  inst.h_a = ParamHamiltonian{inst.dim,
                              [n_sites, h_plus](const std::vector<double>& d) {
                                return chain_one_hamiltonian(n_sites, h_plus,
                                                             d.at(0), d.at(1));
                              },
                              inst.nominal_delta};
  inst.h_b = ParamHamiltonian{inst.dim,
                              [n_sites, h_minus](const std::vector<double>& d) {
                                return chain_one_hamiltonian(n_sites, h_minus,
                                                             d.at(0), d.at(1));
                              },
                              inst.nominal_delta};

  const CVector psi_i = ground_state(chain_one_hamiltonian(n_sites, -2.0, 0.0, 0.0));
  inst.psi_i = [psi_i](const std::vector<double>&) { return psi_i; };
  inst.psi_t = ground_state(chain_one_hamiltonian(n_sites, 2.0, 0.0, 0.0));
  inst.depth = depth;
  inst.theta_box = Box::uniform(2 * static_cast<std::size_t>(depth), 0.0, theta_max);
  return inst;
}

namespace {

// Nearest-neighbour hopping plus the uncertain three-qubit term. The term
// sits on the centered triple (⌊N/2⌋, ⌊N/2⌋+1, ⌊N/2⌋+2) in 1-based sites,
// which is in range exactly when N >= 3.
CMatrix chain_two_hamiltonian_a(int n, double delta) {
  const std::size_t dim = chain_dim(n);
  CMatrix ham(dim);
  for (int i = 1; i < n; ++i) {
    ham.add_scaled(product(pauli_site_operator(PauliAxis::x, i, n),
                           pauli_site_operator(PauliAxis::x, i + 1, n)),
                   1.0);
    ham.add_scaled(product(pauli_site_operator(PauliAxis::y, i, n),
                           pauli_site_operator(PauliAxis::y, i + 1, n)),
                   1.0);
  }
  const int c = n / 2;
  CMatrix triple = product(pauli_site_operator(PauliAxis::z, c, n),
                           pauli_site_operator(PauliAxis::x, c + 1, n));
  triple = product(triple, pauli_site_operator(PauliAxis::z, c + 2, n));
  ham.add_scaled(triple, delta);
  return ham;
}

// (σ^z_N + I) / 2, built literally with σ^z = diag(1, -1): phases every
// basis state whose last qubit is |0>.
CMatrix chain_two_hamiltonian_b(int n) {
  const std::size_t dim = chain_dim(n);
  CMatrix ham = pauli_site_operator(PauliAxis::z, n, n);
  ham.add_scaled(CMatrix::identity(dim), 1.0);
  for (std::size_t i = 0; i < dim; ++i) ham(i, i) *= 0.5;
  return ham;
}

void check_chain_two_length(int n_sites) {
  if (n_sites < 3) {
    throw ChainTooShort(
        "chain length below 3: the three-qubit uncertainty term does not fit");
  }
  if (n_sites > 7) {
    throw InvalidArgument("chain length must be in [3, 7]");
  }
}

}  // namespace

QaoaInstance build_chain_two(int n_sites, int depth, double theta_max) {
  check_chain_two_length(n_sites);
  if (depth == 0) depth = n_sites + 1;
  if (depth < 1) throw InvalidArgument("depth must be at least 1");

  QaoaInstance inst;
  inst.name = "chain_two";
  inst.dim = chain_dim(n_sites);
  inst.delta_dim = 1;
  inst.nominal_delta = {0.0};
  inst.h_a = ParamHamiltonian{inst.dim,
                              [n_sites](const std::vector<double>& d) {
                                return chain_two_hamiltonian_a(n_sites, d.at(0));
                              },
                              inst.nominal_delta};
  const CMatrix hb = chain_two_hamiltonian_b(n_sites);
  inst.h_b = ParamHamiltonian{
      inst.dim, [hb](const std::vector<double>&) { return hb; },
      inst.nominal_delta};

  const CVector psi_i = basis_excitation(1, n_sites);
  inst.psi_i = [psi_i](const std::vector<double>&) { return psi_i; };
  inst.psi_t = basis_excitation(n_sites, n_sites);
  inst.depth = depth;
  inst.theta_box = Box::uniform(2 * static_cast<std::size_t>(depth), 0.0, theta_max);
  return inst;
}

CVector initial_state_with_error(int n_sites, double omega2, double omega3) {
  if (n_sites < 3) {
    throw ChainTooShort("initial_state_with_error: needs at least 3 sites");
  }
  check_chain_length(n_sites);
  const double rest = 1.0 - omega2 * omega2 - omega3 * omega3;
  if (rest < 0.0) {
    throw InvalidAmplitudes("initial_state_with_error: ω₂² + ω₃² > 1");
  }
  CVector v(chain_dim(n_sites));
  v[site_mask(1, n_sites)] = std::sqrt(rest);
  v[site_mask(2, n_sites)] = omega2;
  v[site_mask(3, n_sites)] = omega3;
  return v;
}

QaoaInstance build_chain_two_init_error(int n_sites, int depth, double theta_max) {
  check_chain_two_length(n_sites);
  QaoaInstance inst = build_chain_two(n_sites, depth, theta_max);
  inst.name = "chain_two_init_error";
  inst.delta_dim = 2;
  inst.nominal_delta = {0.0, 0.0};

  // Controls are uncertainty free; δ only enters the prepared initial state.
  const CMatrix ha = chain_two_hamiltonian_a(n_sites, 0.0);
  inst.h_a = ParamHamiltonian{
      inst.dim, [ha](const std::vector<double>&) { return ha; },
      inst.nominal_delta};
  const CMatrix hb = chain_two_hamiltonian_b(n_sites);
  inst.h_b = ParamHamiltonian{
      inst.dim, [hb](const std::vector<double>&) { return hb; },
      inst.nominal_delta};
  inst.psi_i = [n_sites](const std::vector<double>& d) {
    return initial_state_with_error(n_sites, d.at(0), d.at(1));
  };
  return inst;
}

}  // namespace qrobust
