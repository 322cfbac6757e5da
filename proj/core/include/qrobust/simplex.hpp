#pragma once

#include <cstddef>
#include <vector>

#include "qrobust/errors.hpp"

namespace qrobust {

// maximize c^T x  subject to  A x <= b,  lower <= x <= upper.
// Bounds may be +-infinity.
struct LpProblem {
  std::vector<double> c;
  std::vector<std::vector<double>> a;  // m rows of length n
  std::vector<double> b;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_vars() const { return c.size(); }
  std::size_t num_rows() const { return a.size(); }
};

struct LpResult {
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

// Dense two-phase bounded-variable simplex with Bland's anti-cycling rule.
// Sized for small problems; every basis system is re-solved from scratch.
// Throws Unbounded when the objective is unbounded over the feasible set and
// NumericalFailure on an infeasible or numerically degenerate instance.
LpResult solve_bounded_lp(const LpProblem& lp);

}  // namespace qrobust
