#include "qrobust/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qrobust {

double CVector::norm() const {
  double s = 0.0;
  for (const cdouble& x : e_) s += std::norm(x);
  return std::sqrt(s);
}

void CVector::scale(cdouble a) {
  for (cdouble& x : e_) x *= a;
}

CVector CVector::scaled(cdouble a) const {
  CVector out = *this;
  out.scale(a);
  return out;
}

cdouble inner(const CVector& a, const CVector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("inner: vector dimensions differ");
  }
  cdouble s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

CVector CMatrix::apply(const CVector& v) const {
  if (v.dim() != dim_) throw DimensionMismatch("apply: dimension mismatch");
  CVector out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    cdouble s = 0.0;
    const cdouble* row = e_.data() + r * dim_;
    for (std::size_t c = 0; c < dim_; ++c) s += row[c] * v[c];
    out[r] = s;
  }
  return out;
}

CVector CMatrix::apply_adjoint(const CVector& v) const {
  if (v.dim() != dim_) {
    throw DimensionMismatch("apply_adjoint: dimension mismatch");
  }
  CVector out(dim_);
  for (std::size_t c = 0; c < dim_; ++c) out[c] = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    const cdouble* row = e_.data() + r * dim_;
    const cdouble vr = v[r];
    for (std::size_t c = 0; c < dim_; ++c) out[c] += std::conj(row[c]) * vr;
  }
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

void CMatrix::add_scaled(const CMatrix& other, cdouble a) {
  if (other.dim_ != dim_) {
    throw DimensionMismatch("add_scaled: dimension mismatch");
  }
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += a * other.e_[i];
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const cdouble& x : e_) m = std::max(m, std::abs(x));
  return m;
}

bool CMatrix::is_hermitian(double tol) const {
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = r; c < dim_; ++c) {
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) {
        return false;
      }
    }
  }
  return true;
}

CMatrix product(const CMatrix& a, const CMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("product: dimension mismatch");
  const std::size_t n = a.dim();
  CMatrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const cdouble ark = a(r, k);
      if (ark == cdouble(0.0)) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
    }
  }
  return out;
}

double RealMatrix::max_abs() const {
  double m = 0.0;
  for (double x : e_) m = std::max(m, std::abs(x));
  return m;
}

bool RealMatrix::is_symmetric(double tol) const {
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = r + 1; c < dim_; ++c) {
      if (std::abs((*this)(r, c) - (*this)(c, r)) > tol) return false;
    }
  }
  return true;
}

namespace {

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  const std::size_t n = a.dim();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (r != c) s += std::norm(a(r, c));
    }
  }
  return std::sqrt(s);
}

double frobenius_norm(const CMatrix& a) {
  double s = 0.0;
  const std::size_t n = a.dim();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) s += std::norm(a(r, c));
  }
  return std::sqrt(s);
}

// One unitary plane rotation zeroing a(p, q). Updates a and accumulates the
// rotation into v (v <- v * G).
void jacobi_rotate(CMatrix& a, CMatrix& v, std::size_t p, std::size_t q) {
  const cdouble apq = a(p, q);
  const double beta = std::abs(apq);
  if (beta == 0.0) return;
  const cdouble phase = apq / beta;  // e^{i arg(a_pq)}

  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * beta);
  double t;
  if (tau >= 0.0) {
    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
  } else {
    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const cdouble sigma = s * phase;

  const std::size_t n = a.dim();
  // Right multiplication: columns p and q.
  for (std::size_t i = 0; i < n; ++i) {
    const cdouble aip = a(i, p);
    const cdouble aiq = a(i, q);
    a(i, p) = c * aip - std::conj(sigma) * aiq;
    a(i, q) = sigma * aip + c * aiq;
  }
  // Left multiplication by the adjoint: rows p and q.
  for (std::size_t j = 0; j < n; ++j) {
    const cdouble apj = a(p, j);
    const cdouble aqj = a(q, j);
    a(p, j) = c * apj - sigma * aqj;
    a(q, j) = std::conj(sigma) * apj + c * aqj;
  }
  // Exact zero on the eliminated pair keeps the off-norm honest.
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t i = 0; i < n; ++i) {
    const cdouble vip = v(i, p);
    const cdouble viq = v(i, q);
    v(i, p) = c * vip - std::conj(sigma) * viq;
    v(i, q) = sigma * vip + c * viq;
  }
}

}  // namespace

EigDecomposition hermitian_eig(const CMatrix& input) {
  if (input.dim() == 0) throw InvalidArgument("hermitian_eig: empty matrix");
  if (input.dim() > 1024) {
    throw InvalidArgument("hermitian_eig: dimension above supported maximum");
  }
  if (!input.is_hermitian(1e-12)) {
    throw NotHermitian("hermitian_eig: matrix is not Hermitian within 1e-12");
  }

  const std::size_t n = input.dim();
  CMatrix a = input;
  CMatrix v = CMatrix::identity(n);

  const double scale = std::max(1.0, frobenius_norm(a));
  const double target = 1e-14 * scale;
  const int max_sweeps = 60;

  bool converged = (n == 1);
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) > target / static_cast<double>(n)) {
          jacobi_rotate(a, v, p, q);
        }
      }
    }
    converged = off_diagonal_norm(a) <= target;
  }
  if (!converged) {
    throw NoConvergence("hermitian_eig: Jacobi sweeps exhausted");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

  EigDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = diag[order[k]];
    for (std::size_t i = 0; i < n; ++i) {
      out.eigenvectors(i, k) = v(i, order[k]);
    }
  }
  return out;
}

SymEigDecomposition symmetric_eig(const RealMatrix& a) {
  if (!a.is_symmetric(1e-9)) {
    throw NotSymmetric("symmetric_eig: matrix is not symmetric");
  }
  const std::size_t n = a.dim();
  CMatrix c(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < n; ++j) {
      c(r, j) = 0.5 * (a(r, j) + a(j, r));
    }
  }
  EigDecomposition eig = hermitian_eig(c);

  SymEigDecomposition out;
  out.eigenvalues = std::move(eig.eigenvalues);
  out.eigenvectors = RealMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Columns of a real symmetric eigenbasis may pick up a complex phase in
    // the Hermitian kernel; rotate each column back to the real axis.
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = std::abs(eig.eigenvectors(i, k));
      if (m > best) {
        best = m;
        imax = i;
      }
    }
    cdouble phase = eig.eigenvectors(imax, k);
    phase /= std::abs(phase);
    for (std::size_t i = 0; i < n; ++i) {
      out.eigenvectors(i, k) = (eig.eigenvectors(i, k) / phase).real();
    }
  }
  return out;
}

CMatrix unitary_from_hamiltonian(const CMatrix& h, double theta) {
  return EvolutionOperator(h).matrix(theta);
}

CVector ground_state(const CMatrix& h) {
  const EigDecomposition eig = hermitian_eig(h);
  const std::size_t n = h.dim();
  if (n >= 2 && eig.eigenvalues[1] - eig.eigenvalues[0] <= 1e-10) {
    throw DegenerateGroundState(
        "ground_state: spectral gap below 1e-10, phase convention undefined");
  }
  CVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = eig.eigenvectors(i, 0);

  std::size_t imax = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::abs(v[i]);
    if (m > best) {
      best = m;
      imax = i;
    }
  }
  cdouble phase = v[imax] / std::abs(v[imax]);
  v.scale(std::conj(phase));
  v.scale(1.0 / v.norm());
  return v;
}

EvolutionOperator::EvolutionOperator(const CMatrix& h)
    : h_(h), eig_(hermitian_eig(h)) {}

CVector EvolutionOperator::apply(double theta, const CVector& v) const {
  CVector w = eig_.eigenvectors.apply_adjoint(v);
  for (std::size_t j = 0; j < w.dim(); ++j) {
    w[j] *= std::polar(1.0, -eig_.eigenvalues[j] * theta);
  }
  return eig_.eigenvectors.apply(w);
}

CVector EvolutionOperator::apply_inverse(double theta, const CVector& v) const {
  return apply(-theta, v);
}

CMatrix EvolutionOperator::matrix(double theta) const {
  const std::size_t n = h_.dim();
  CMatrix scaled(n);  // V diag(e^{-i λ θ})
  for (std::size_t j = 0; j < n; ++j) {
    const cdouble ph = std::polar(1.0, -eig_.eigenvalues[j] * theta);
    for (std::size_t i = 0; i < n; ++i) {
      scaled(i, j) = eig_.eigenvectors(i, j) * ph;
    }
  }
  return product(scaled, eig_.eigenvectors.adjoint());
}

}  // namespace qrobust
