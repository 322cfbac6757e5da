#pragma once

#include <vector>

#include "qrobust/box.hpp"
#include "qrobust/linalg.hpp"
#include "qrobust/simplex.hpp"

namespace qrobust {

// First-order model of one scenario around the current iterate:
// F̃(step) = base_value + gradient · step.
struct LinearSurrogate {
  double base_value = 0.0;
  std::vector<double> gradient;

  double at(const std::vector<double>& step) const;
};

// Same with a concave curvature term (the negative-semidefinite Hessian
// part): F̃(step) = base + g·step + step·H₋·step / 2.
struct QuadraticSurrogate {
  double base_value = 0.0;
  std::vector<double> gradient;
  RealMatrix hess_minus;

  double at(const std::vector<double>& step) const;
};

struct TrustRegion {
  double diameter = 0.0;  // ∞-norm box of radius diameter/2 around the iterate
};

// Epigraph form of the max-min subproblem: maximize the slack f0 subject to
// every surrogate staying above it, with per-component step bounds given by
// the intersection of the shifted feasible box and the trust box.
struct EpigraphLP {
  std::vector<LinearSurrogate> rows;
  std::vector<double> lower;  // step bounds, length = parameter count
  std::vector<double> upper;
};

EpigraphLP build_epigraph(const std::vector<LinearSurrogate>& surrogates,
                          const std::vector<double>& theta,
                          const Box& theta_box, TrustRegion trust);

struct SubproblemSolution {
  std::vector<double> step;
  double value = 0.0;  // predicted min-surrogate value at the step
};

// Solves the epigraph LP with the bounded simplex and verifies the returned
// step against the bounds and constraints.
SubproblemSolution solve_lp(const EpigraphLP& lp);

// Approximate max-min of concave quadratics over the same bounds: projected
// subgradient ascent with iterate averaging and a diminishing step schedule.
// Falls back to the exact LP when every curvature term is zero. The returned
// value never falls below the value of the zero step.
SubproblemSolution solve_maxmin_quadratic(
    const std::vector<QuadraticSurrogate>& surrogates,
    const std::vector<double>& theta, const Box& theta_box, TrustRegion trust,
    int iterations = 500);

}  // namespace qrobust
