#include <doctest.h>

#include <cmath>

#include "qrobust/linalg.hpp"
#include "qrobust/rng.hpp"
#include "qrobust/spin_systems.hpp"

#ifdef QROBUST_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace qrobust;

namespace {

CMatrix random_hermitian(std::size_t dim, Rng& rng) {
  CMatrix h(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    h(r, r) = rng.uniform(-2.0, 2.0);
    for (std::size_t c = r + 1; c < dim; ++c) {
      const cdouble v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      h(r, c) = v;
      h(c, r) = std::conj(v);
    }
  }
  return h;
}

CMatrix pauli_x2() {
  CMatrix m(2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

CMatrix minus_z_plus_x(double xcoef) {
  CMatrix m(2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  m(0, 1) = xcoef;
  m(1, 0) = xcoef;
  return m;
}

// Truncated exponential series; independent of the eigendecomposition path.
CMatrix taylor_expm(const CMatrix& h, double theta, int terms) {
  const std::size_t n = h.dim();
  CMatrix sum = CMatrix::identity(n);
  CMatrix term = CMatrix::identity(n);
  const cdouble factor(0.0, -theta);
  for (int k = 1; k <= terms; ++k) {
    term = product(term, h);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        term(r, c) *= factor / static_cast<double>(k);
      }
    }
    sum.add_scaled(term, 1.0);
  }
  return sum;
}

double max_diff(const CMatrix& a, const CMatrix& b) {
  CMatrix d = a;
  d.add_scaled(b, -1.0);
  return d.max_abs();
}

}  // namespace

TEST_CASE("hermitian_eig on closed-form 2x2 matrices") {
  const EigDecomposition id_eig = hermitian_eig(CMatrix::identity(2));
  CHECK(id_eig.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(id_eig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));

  const EigDecomposition x_eig = hermitian_eig(pauli_x2());
  CHECK(x_eig.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(x_eig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));

  const EigDecomposition drive = hermitian_eig(minus_z_plus_x(2.0));
  CHECK(drive.eigenvalues[0] == doctest::Approx(-std::sqrt(5.0)).epsilon(1e-14));
  CHECK(drive.eigenvalues[1] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("hermitian_eig reconstruction and orthonormality") {
  Rng rng(101);
  for (std::size_t dim : {2u, 5u, 16u, 32u}) {
    const CMatrix h = random_hermitian(dim, rng);
    const EigDecomposition eig = hermitian_eig(h);

    for (std::size_t k = 0; k + 1 < dim; ++k) {
      CHECK(eig.eigenvalues[k] <= eig.eigenvalues[k + 1]);
    }

    // V diag(lambda) V†
    CMatrix scaled(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t i = 0; i < dim; ++i) {
        scaled(i, j) = eig.eigenvectors(i, j) * eig.eigenvalues[j];
      }
    }
    const CMatrix rebuilt = product(scaled, eig.eigenvectors.adjoint());
    CHECK(max_diff(rebuilt, h) <= 1e-10 * std::max(1.0, h.max_abs()));

    CMatrix gram = product(eig.eigenvectors.adjoint(), eig.eigenvectors);
    gram.add_scaled(CMatrix::identity(dim), -1.0);
    CHECK(gram.max_abs() <= 1e-10);
  }
}

TEST_CASE("hermitian_eig rejects non-hermitian input") {
  CMatrix bad(2);
  bad(0, 1) = 1.0;
  bad(1, 0) = 0.5;
  CHECK_THROWS_AS(hermitian_eig(bad), NotHermitian);
}

#ifdef QROBUST_HAVE_EIGEN
TEST_CASE("hermitian_eig matches Eigen on random matrices") {
  Rng rng(202);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dim = 3 + static_cast<std::size_t>(rng.uniform() * 14);
    const CMatrix h = random_hermitian(dim, rng);
    Eigen::MatrixXcd m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) m(r, c) = h(r, c);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    const EigDecomposition eig = hermitian_eig(h);
    for (std::size_t k = 0; k < dim; ++k) {
      CHECK(eig.eigenvalues[k] ==
            doctest::Approx(solver.eigenvalues()[static_cast<long>(k)])
                .epsilon(1e-11));
    }
  }
}
#endif

TEST_CASE("unitary_from_hamiltonian special angles") {
  Rng rng(303);
  const CMatrix h = random_hermitian(4, rng);
  CHECK(max_diff(unitary_from_hamiltonian(h, 0.0), CMatrix::identity(4)) <=
        1e-12);

  // exp(-i (pi/2) sigma_x) = -i sigma_x
  const CMatrix u = unitary_from_hamiltonian(pauli_x2(), M_PI / 2.0);
  CMatrix expect(2);
  expect(0, 1) = cdouble(0.0, -1.0);
  expect(1, 0) = cdouble(0.0, -1.0);
  CHECK(max_diff(u, expect) <= 1e-12);
}

TEST_CASE("unitary_from_hamiltonian matches the truncated series") {
  Rng rng(404);
  const CMatrix h = random_hermitian(4, rng);
  const CMatrix u = unitary_from_hamiltonian(h, 0.3);
  const CMatrix series = taylor_expm(h, 0.3, 30);
  CHECK(max_diff(u, series) <= 1e-9);
}

TEST_CASE("evolution operator group identities") {
  Rng rng(505);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix h = random_hermitian(6, rng);
    const EvolutionOperator op(h);
    const double t1 = rng.uniform(-2.0, 2.0);
    const double t2 = rng.uniform(-2.0, 2.0);

    CMatrix inverse_pair = product(op.matrix(t1), op.matrix(-t1));
    inverse_pair.add_scaled(CMatrix::identity(6), -1.0);
    CHECK(inverse_pair.max_abs() <= 1e-10);

    const CMatrix composed = product(op.matrix(t1), op.matrix(t2));
    CHECK(max_diff(composed, op.matrix(t1 + t2)) <= 1e-10);

    CMatrix uu = product(op.matrix(t1), op.matrix(t1).adjoint());
    uu.add_scaled(CMatrix::identity(6), -1.0);
    CHECK(uu.max_abs() <= 1e-10);
  }
}

TEST_CASE("ground_state closed forms and phase convention") {
  CMatrix minus_z(2);
  minus_z(0, 0) = -1.0;
  minus_z(1, 1) = 1.0;
  const CVector g0 = ground_state(minus_z);
  CHECK(std::abs(g0[0] - cdouble(1.0, 0.0)) <= 1e-12);
  CHECK(std::abs(g0[1]) <= 1e-12);

  const CMatrix h = minus_z_plus_x(2.0);
  const CVector g = ground_state(h);
  const CVector hg = h.apply(g);
  const double energy = inner(g, hg).real();
  CHECK(energy == doctest::Approx(-std::sqrt(5.0)).epsilon(1e-12));
  CHECK(g.norm() == doctest::Approx(1.0).epsilon(1e-12));

  // Largest-magnitude entry real positive.
  std::size_t imax = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < 2; ++i) {
    if (std::abs(g[i]) > best) {
      best = std::abs(g[i]);
      imax = i;
    }
  }
  CHECK(g[imax].imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g[imax].real() > 0.0);
}

TEST_CASE("ground_state energy equals the smallest eigenvalue") {
  Rng rng(606);
  const CMatrix h = random_hermitian(8, rng);
  const EigDecomposition eig = hermitian_eig(h);
  double min_eig = eig.eigenvalues[0];
  for (double lam : eig.eigenvalues) min_eig = std::min(min_eig, lam);
  CHECK(eig.eigenvalues[0] == min_eig);  // ascending order is exact

  const CVector g = ground_state(h);
  CHECK(inner(g, h.apply(g)).real() ==
        doctest::Approx(eig.eigenvalues[0]).epsilon(1e-10));
}

TEST_CASE("ground_state rejects a degenerate gap") {
  CHECK_THROWS_AS(ground_state(CMatrix::identity(4)), DegenerateGroundState);
}

#ifdef QROBUST_HAVE_EIGEN
TEST_CASE("chain ground state matches a brute-force diagonalization") {
  // Ising chain, three sites, field -2, no coupling uncertainty.
  const int n = 3;
  const std::size_t dim = 8;
  CMatrix ham(dim);
  for (int j = 1; j < n; ++j) {
    ham.add_scaled(product(pauli_site_operator(PauliAxis::z, j, n),
                           pauli_site_operator(PauliAxis::z, j + 1, n)),
                   -1.0);
  }
  for (int j = 1; j <= n; ++j) {
    ham.add_scaled(pauli_site_operator(PauliAxis::z, j, n), -1.0);
    ham.add_scaled(pauli_site_operator(PauliAxis::x, j, n), 2.0);  // -h, h=-2
  }

  Eigen::MatrixXcd m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = ham(r, c);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  Eigen::VectorXcd ref = solver.eigenvectors().col(0);

  const CVector g = ground_state(ham);
  cdouble overlap = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    overlap += std::conj(ref[static_cast<long>(i)]) * g[i];
  }
  CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(inner(g, ham.apply(g)).real() ==
        doctest::Approx(solver.eigenvalues()[0]).epsilon(1e-9));
}
#endif

TEST_CASE("symmetric_eig reconstructs the input") {
  Rng rng(707);
  const std::size_t dim = 6;
  RealMatrix s(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = r; c < dim; ++c) {
      const double v = rng.uniform(-1.0, 1.0);
      s(r, c) = v;
      s(c, r) = v;
    }
  }
  const SymEigDecomposition eig = symmetric_eig(s);
  RealMatrix rebuilt(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        rebuilt(r, c) +=
            eig.eigenvalues[k] * eig.eigenvectors(r, k) * eig.eigenvectors(c, k);
      }
    }
  }
  double worst = 0.0;
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      worst = std::max(worst, std::abs(rebuilt(r, c) - s(r, c)));
    }
  }
  CHECK(worst <= 1e-10);
}
