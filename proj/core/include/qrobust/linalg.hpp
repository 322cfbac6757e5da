#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qrobust/errors.hpp"

namespace qrobust {

using cdouble = std::complex<double>;

// Dense complex vector.
class CVector {
public:
  CVector() = default;
  explicit CVector(std::size_t dim) : e_(dim) {}

  std::size_t dim() const { return e_.size(); }
  cdouble& operator[](std::size_t i) { return e_[i]; }
  const cdouble& operator[](std::size_t i) const { return e_[i]; }

  const std::vector<cdouble>& entries() const { return e_; }

  double norm() const;
  void scale(cdouble a);
  CVector scaled(cdouble a) const;

  bool operator==(const CVector&) const = default;

private:
  std::vector<cdouble> e_;
};

// <a|b> with the first argument conjugated.
cdouble inner(const CVector& a, const CVector& b);

// Dense square complex matrix, row-major.
class CMatrix {
public:
  CMatrix() = default;
  explicit CMatrix(std::size_t dim) : dim_(dim), e_(dim * dim) {}

  static CMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  cdouble& operator()(std::size_t r, std::size_t c) { return e_[r * dim_ + c]; }
  const cdouble& operator()(std::size_t r, std::size_t c) const {
    return e_[r * dim_ + c];
  }

  CVector apply(const CVector& v) const;          // A v
  CVector apply_adjoint(const CVector& v) const;  // A† v
  CMatrix adjoint() const;

  void add_scaled(const CMatrix& other, cdouble a);  // this += a * other
  double max_abs() const;
  bool is_hermitian(double tol = 1e-12) const;

  bool operator==(const CMatrix&) const = default;

private:
  std::size_t dim_ = 0;
  std::vector<cdouble> e_;
};

CMatrix product(const CMatrix& a, const CMatrix& b);

// Dense square real matrix, row-major.
class RealMatrix {
public:
  RealMatrix() = default;
  explicit RealMatrix(std::size_t dim) : dim_(dim), e_(dim * dim) {}

  std::size_t dim() const { return dim_; }
  double& operator()(std::size_t r, std::size_t c) { return e_[r * dim_ + c]; }
  const double& operator()(std::size_t r, std::size_t c) const {
    return e_[r * dim_ + c];
  }

  double max_abs() const;
  bool is_symmetric(double tol = 1e-9) const;

  bool operator==(const RealMatrix&) const = default;

private:
  std::size_t dim_ = 0;
  std::vector<double> e_;
};

struct EigDecomposition {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // column k pairs with eigenvalues[k]
};

// Cyclic Jacobi diagonalization of a Hermitian matrix. Eigenvalues come back
// ascending with orthonormal eigenvector columns.
// Throws NotHermitian when the symmetry check fails and NoConvergence when
// the sweep budget runs out.
EigDecomposition hermitian_eig(const CMatrix& a);

// Real symmetric eigendecomposition via the Hermitian kernel.
struct SymEigDecomposition {
  std::vector<double> eigenvalues;  // ascending
  RealMatrix eigenvectors;          // column k pairs with eigenvalues[k]
};
SymEigDecomposition symmetric_eig(const RealMatrix& a);

// exp(-i h theta) through the eigendecomposition of h.
CMatrix unitary_from_hamiltonian(const CMatrix& h, double theta);

// Unit-norm eigenvector of the smallest eigenvalue, with the global phase
// fixed so the largest-magnitude entry is real positive. Throws
// DegenerateGroundState when the spectral gap is below 1e-10.
CVector ground_state(const CMatrix& h);

// Holds one eigendecomposition so repeated exp(-i h theta) applications for
// different theta reuse it.
class EvolutionOperator {
public:
  EvolutionOperator() = default;
  explicit EvolutionOperator(const CMatrix& h);

  const CMatrix& hamiltonian() const { return h_; }
  const EigDecomposition& eig() const { return eig_; }

  CVector apply(double theta, const CVector& v) const;          // exp(-iHθ) v
  CVector apply_inverse(double theta, const CVector& v) const;  // exp(+iHθ) v
  CMatrix matrix(double theta) const;

private:
  CMatrix h_;
  EigDecomposition eig_;
};

}  // namespace qrobust
