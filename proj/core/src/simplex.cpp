#include "qrobust/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrobust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;

// Gaussian elimination with partial pivoting; m is consumed.
std::vector<double> solve_dense(std::vector<std::vector<double>> m,
                                std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) < 1e-13) {
      throw NumericalFailure("simplex: singular basis matrix");
    }
    std::swap(m[col], m[piv]);
    std::swap(rhs[col], rhs[piv]);
    const double inv = 1.0 / m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r][col] * inv;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = rhs[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= m[r][c] * x[c];
    x[r] = s / m[r][r];
  }
  return x;
}

enum class VarStatus { basic, at_lower, at_upper, at_zero };

class BoundedSimplex {
public:
  explicit BoundedSimplex(const LpProblem& lp)
      : n_(lp.num_vars()), m_(lp.num_rows()), b_(lp.b) {
    const std::size_t total = n_ + m_;
    cols_.assign(total, std::vector<double>(m_, 0.0));
    lb_.assign(total, 0.0);
    ub_.assign(total, kInf);
    obj_.assign(total, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t i = 0; i < m_; ++i) cols_[j][i] = lp.a[i][j];
      lb_[j] = lp.lower[j];
      ub_[j] = lp.upper[j];
      obj_[j] = lp.c[j];
      if (lb_[j] > ub_[j]) {
        throw NumericalFailure("simplex: inconsistent variable bounds");
      }
    }
    for (std::size_t s = 0; s < m_; ++s) cols_[n_ + s][s] = 1.0;  // slacks

    status_.assign(total, VarStatus::at_lower);
    value_.assign(total, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (std::isfinite(lb_[j]) && std::isfinite(ub_[j])) {
        const bool pick_lower = std::abs(lb_[j]) <= std::abs(ub_[j]);
        status_[j] = pick_lower ? VarStatus::at_lower : VarStatus::at_upper;
        value_[j] = pick_lower ? lb_[j] : ub_[j];
      } else if (std::isfinite(lb_[j])) {
        status_[j] = VarStatus::at_lower;
        value_[j] = lb_[j];
      } else if (std::isfinite(ub_[j])) {
        status_[j] = VarStatus::at_upper;
        value_[j] = ub_[j];
      } else {
        status_[j] = VarStatus::at_zero;
        value_[j] = 0.0;
      }
    }

    // Slack basis; rows whose slack would start negative get an artificial.
    basis_.resize(m_);
    std::vector<double> residual = b_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        residual[i] -= cols_[j][i] * value_[j];
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (residual[i] >= 0.0) {
        basis_[i] = n_ + i;
        status_[n_ + i] = VarStatus::basic;
        value_[n_ + i] = residual[i];
      } else {
        const std::size_t art = cols_.size();
        cols_.emplace_back(m_, 0.0);
        cols_[art][i] = -1.0;
        lb_.push_back(0.0);
        ub_.push_back(kInf);
        obj_.push_back(0.0);
        status_.push_back(VarStatus::basic);
        value_.push_back(-residual[i]);
        artificials_.push_back(art);
        basis_[i] = art;
        // The displaced slack stays nonbasic at zero.
      }
    }
  }

  LpResult run() {
    int total_iters = 0;
    if (!artificials_.empty()) {
      std::vector<double> phase1(cols_.size(), 0.0);
      for (std::size_t art : artificials_) phase1[art] = -1.0;
      total_iters += optimize(phase1, /*allow_unbounded=*/false);
      double infeasibility = 0.0;
      for (std::size_t art : artificials_) infeasibility += value_[art];
      if (infeasibility > 1e-7) {
        throw NumericalFailure("simplex: problem is infeasible");
      }
      // Pin artificials at zero for phase 2.
      for (std::size_t art : artificials_) {
        ub_[art] = 0.0;
        value_[art] = 0.0;
      }
    }
    std::vector<double> phase2 = obj_;
    phase2.resize(cols_.size(), 0.0);
    total_iters += optimize(phase2, /*allow_unbounded=*/true);

    LpResult out;
    out.x.assign(value_.begin(), value_.begin() + n_);
    out.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) out.objective += obj_[j] * value_[j];
    out.iterations = total_iters;
    return out;
  }

private:
  bool is_artificial(std::size_t j) const { return j >= n_ + m_; }

  void recompute_basic_values() {
    std::vector<double> rhs = b_;
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (status_[j] == VarStatus::basic) continue;
      if (value_[j] == 0.0) continue;
      for (std::size_t i = 0; i < m_; ++i) rhs[i] -= cols_[j][i] * value_[j];
    }
    std::vector<std::vector<double>> bmat(m_, std::vector<double>(m_));
    for (std::size_t k = 0; k < m_; ++k) {
      for (std::size_t i = 0; i < m_; ++i) bmat[i][k] = cols_[basis_[k]][i];
    }
    const std::vector<double> xb = solve_dense(std::move(bmat), std::move(rhs));
    for (std::size_t k = 0; k < m_; ++k) value_[basis_[k]] = xb[k];
  }

  std::vector<double> dual_prices(const std::vector<double>& objective) const {
    std::vector<std::vector<double>> bt(m_, std::vector<double>(m_));
    std::vector<double> cb(m_);
    for (std::size_t k = 0; k < m_; ++k) {
      for (std::size_t i = 0; i < m_; ++i) bt[k][i] = cols_[basis_[k]][i];
      cb[k] = objective[basis_[k]];
    }
    return solve_dense(std::move(bt), std::move(cb));
  }

  std::vector<double> basis_direction(std::size_t enter) const {
    std::vector<std::vector<double>> bmat(m_, std::vector<double>(m_));
    for (std::size_t k = 0; k < m_; ++k) {
      for (std::size_t i = 0; i < m_; ++i) bmat[i][k] = cols_[basis_[k]][i];
    }
    return solve_dense(std::move(bmat), cols_[enter]);
  }

  int optimize(const std::vector<double>& objective, bool allow_unbounded) {
    const int max_iters = 2000 + 200 * static_cast<int>(n_ + m_);
    int iter = 0;
    recompute_basic_values();
    while (true) {
      if (++iter > max_iters) {
        throw NumericalFailure("simplex: iteration limit reached");
      }
      const std::vector<double> y = dual_prices(objective);

      // Bland: smallest-index eligible entering variable.
      std::size_t enter = cols_.size();
      int dir = 0;
      for (std::size_t j = 0; j < cols_.size(); ++j) {
        if (status_[j] == VarStatus::basic) continue;
        if (is_artificial(j)) continue;  // never re-enters
        if (lb_[j] == ub_[j]) continue;  // fixed
        double d = objective[j];
        for (std::size_t i = 0; i < m_; ++i) d -= y[i] * cols_[j][i];
        if ((status_[j] == VarStatus::at_lower ||
             status_[j] == VarStatus::at_zero) &&
            d > kReducedCostTol) {
          enter = j;
          dir = +1;
          break;
        }
        if ((status_[j] == VarStatus::at_upper ||
             status_[j] == VarStatus::at_zero) &&
            d < -kReducedCostTol) {
          enter = j;
          dir = -1;
          break;
        }
      }
      if (enter == cols_.size()) return iter;  // optimal for this phase

      const std::vector<double> w = basis_direction(enter);

      // Ratio test; ties resolved toward the smallest variable index.
      double t_ratio = kInf;
      std::size_t leave_pos = m_;
      bool leave_to_upper = false;
      for (std::size_t k = 0; k < m_; ++k) {
        const std::size_t v = basis_[k];
        const double delta = -dir * w[k];
        if (delta > kPivotTol && std::isfinite(ub_[v])) {
          const double t = (ub_[v] - value_[v]) / delta;
          if (t < t_ratio - 1e-12 ||
              (t < t_ratio + 1e-12 && (leave_pos == m_ || v < basis_[leave_pos]))) {
            t_ratio = std::max(t, 0.0);
            leave_pos = k;
            leave_to_upper = true;
          }
        } else if (delta < -kPivotTol && std::isfinite(lb_[v])) {
          const double t = (lb_[v] - value_[v]) / delta;
          if (t < t_ratio - 1e-12 ||
              (t < t_ratio + 1e-12 && (leave_pos == m_ || v < basis_[leave_pos]))) {
            t_ratio = std::max(t, 0.0);
            leave_pos = k;
            leave_to_upper = false;
          }
        }
      }

      double t_flip = kInf;
      if (status_[enter] != VarStatus::at_zero && std::isfinite(lb_[enter]) &&
          std::isfinite(ub_[enter])) {
        t_flip = ub_[enter] - lb_[enter];
      }

      if (!std::isfinite(std::min(t_ratio, t_flip))) {
        if (allow_unbounded) {
          throw Unbounded("simplex: objective unbounded over the feasible set");
        }
        throw NumericalFailure("simplex: unbounded phase-1 subproblem");
      }

      if (t_ratio <= t_flip) {
        // Pivot: entering variable becomes basic.
        const std::size_t leave = basis_[leave_pos];
        value_[enter] += dir * t_ratio;
        for (std::size_t k = 0; k < m_; ++k) {
          value_[basis_[k]] -= dir * t_ratio * w[k];
        }
        value_[leave] = leave_to_upper ? ub_[leave] : lb_[leave];
        status_[leave] =
            leave_to_upper ? VarStatus::at_upper : VarStatus::at_lower;
        basis_[leave_pos] = enter;
        status_[enter] = VarStatus::basic;
        recompute_basic_values();
      } else {
        // Bound flip, basis unchanged.
        value_[enter] = (dir > 0) ? ub_[enter] : lb_[enter];
        status_[enter] =
            (dir > 0) ? VarStatus::at_upper : VarStatus::at_lower;
        recompute_basic_values();
      }
    }
  }

  std::size_t n_;
  std::size_t m_;
  std::vector<double> b_;
  std::vector<std::vector<double>> cols_;  // column-major constraint matrix
  std::vector<double> lb_, ub_, obj_;
  std::vector<VarStatus> status_;
  std::vector<double> value_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> artificials_;
};

}  // namespace

LpResult solve_bounded_lp(const LpProblem& lp) {
  if (lp.lower.size() != lp.num_vars() || lp.upper.size() != lp.num_vars()) {
    throw InvalidArgument("solve_bounded_lp: bound arrays mismatch");
  }
  if (lp.b.size() != lp.num_rows()) {
    throw InvalidArgument("solve_bounded_lp: rhs length mismatch");
  }
  for (const auto& row : lp.a) {
    if (row.size() != lp.num_vars()) {
      throw InvalidArgument("solve_bounded_lp: ragged constraint matrix");
    }
  }
  BoundedSimplex solver(lp);
  return solver.run();
}

}  // namespace qrobust
