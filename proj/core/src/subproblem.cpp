#include "qrobust/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrobust {

double LinearSurrogate::at(const std::vector<double>& step) const {
  double v = base_value;
  for (std::size_t i = 0; i < gradient.size(); ++i) v += gradient[i] * step[i];
  return v;
}

double QuadraticSurrogate::at(const std::vector<double>& step) const {
  double v = base_value;
  for (std::size_t i = 0; i < gradient.size(); ++i) v += gradient[i] * step[i];
  for (std::size_t r = 0; r < hess_minus.dim(); ++r) {
    for (std::size_t c = 0; c < hess_minus.dim(); ++c) {
      v += 0.5 * step[r] * hess_minus(r, c) * step[c];
    }
  }
  return v;
}

EpigraphLP build_epigraph(const std::vector<LinearSurrogate>& surrogates,
                          const std::vector<double>& theta,
                          const Box& theta_box, TrustRegion trust) {
  if (surrogates.empty()) {
    throw InvalidArgument("build_epigraph: no surrogates");
  }
  if (theta.size() != theta_box.dim()) {
    throw DimensionMismatch("build_epigraph: theta/box dimension mismatch");
  }
  if (!(trust.diameter > 0.0)) {
    throw InvalidArgument("build_epigraph: trust diameter must be positive");
  }
  const std::size_t n = theta.size();
  for (const LinearSurrogate& s : surrogates) {
    if (s.gradient.size() != n) {
      throw DimensionMismatch("build_epigraph: surrogate gradient length");
    }
  }

  EpigraphLP lp;
  lp.rows = surrogates;
  lp.lower.resize(n);
  lp.upper.resize(n);
  const double radius = 0.5 * trust.diameter;
  for (std::size_t i = 0; i < n; ++i) {
    lp.lower[i] = std::max(theta_box.lower[i] - theta[i], -radius);
    lp.upper[i] = std::min(theta_box.upper[i] - theta[i], radius);
    if (lp.lower[i] > lp.upper[i]) {
      throw InfeasibleBounds(
          "build_epigraph: empty step interval (iterate outside the box?)");
    }
  }
  return lp;
}

SubproblemSolution solve_lp(const EpigraphLP& lp) {
  const std::size_t n = lp.lower.size();
  const std::size_t rows = lp.rows.size();

  // Variables (step, f0); one row per surrogate: f0 - g_i · step <= base_i.
  LpProblem prob;
  prob.c.assign(n + 1, 0.0);
  prob.c[n] = 1.0;
  prob.lower = lp.lower;
  prob.upper = lp.upper;

  double bound_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    bound_scale = std::max(bound_scale,
                           std::max(std::abs(lp.lower[i]), std::abs(lp.upper[i])));
  }
  double f0_limit = 1.0;
  for (const LinearSurrogate& s : lp.rows) {
    double reach = std::abs(s.base_value);
    for (double g : s.gradient) reach += std::abs(g) * bound_scale;
    f0_limit = std::max(f0_limit, reach + 1.0);
  }
  prob.lower.push_back(-f0_limit);
  prob.upper.push_back(f0_limit);

  prob.a.reserve(rows);
  prob.b.reserve(rows);
  for (const LinearSurrogate& s : lp.rows) {
    std::vector<double> row(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) row[i] = -s.gradient[i];
    row[n] = 1.0;
    prob.a.push_back(std::move(row));
    prob.b.push_back(s.base_value);
  }

  const LpResult res = solve_bounded_lp(prob);

  SubproblemSolution out;
  out.step.assign(res.x.begin(), res.x.begin() + n);
  out.value = res.x[n];

  // The step must respect the bounds and every surrogate constraint.
  constexpr double slack = 1e-9;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.step[i] < lp.lower[i] - slack || out.step[i] > lp.upper[i] + slack) {
      throw NumericalFailure("solve_lp: step violates its bounds");
    }
    out.step[i] = std::clamp(out.step[i], lp.lower[i], lp.upper[i]);
  }
  for (const LinearSurrogate& s : lp.rows) {
    if (s.at(out.step) < out.value - slack) {
      throw NumericalFailure("solve_lp: surrogate constraint violated");
    }
  }
  return out;
}

namespace {

double min_surrogate_value(const std::vector<QuadraticSurrogate>& surrogates,
                           const std::vector<double>& step,
                           std::size_t* argmin = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < surrogates.size(); ++i) {
    const double v = surrogates[i].at(step);
    if (v < best) {
      best = v;
      if (argmin) *argmin = i;
    }
  }
  return best;
}

}  // namespace

SubproblemSolution solve_maxmin_quadratic(
    const std::vector<QuadraticSurrogate>& surrogates,
    const std::vector<double>& theta, const Box& theta_box, TrustRegion trust,
    int iterations) {
  if (surrogates.empty()) {
    throw InvalidArgument("solve_maxmin_quadratic: no surrogates");
  }

  bool all_linear = true;
  for (const QuadraticSurrogate& s : surrogates) {
    if (s.hess_minus.dim() != 0 && s.hess_minus.max_abs() != 0.0) {
      all_linear = false;
      break;
    }
  }
  if (all_linear) {
    std::vector<LinearSurrogate> linear(surrogates.size());
    for (std::size_t i = 0; i < surrogates.size(); ++i) {
      linear[i] = {surrogates[i].base_value, surrogates[i].gradient};
    }
    return solve_lp(build_epigraph(linear, theta, theta_box, trust));
  }

  const EpigraphLP bounds = build_epigraph(
      [&] {
        std::vector<LinearSurrogate> linear(surrogates.size());
        for (std::size_t i = 0; i < surrogates.size(); ++i) {
          linear[i] = {surrogates[i].base_value, surrogates[i].gradient};
        }
        return linear;
      }(),
      theta, theta_box, trust);
  const std::size_t n = bounds.lower.size();

  auto clip = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::clamp(x[i], bounds.lower[i], bounds.upper[i]);
    }
  };

  std::vector<double> x(n, 0.0);
  std::vector<double> best = x;
  double best_value = min_surrogate_value(surrogates, x);
  const double zero_value = best_value;

  double width = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    width = std::max(width, bounds.upper[i] - bounds.lower[i]);
  }
  if (width == 0.0 || iterations <= 0) {
    return {best, best_value};
  }

  // Epoch schedule: fixed step within an epoch, geometric decay across
  // epochs, each epoch restarted from the incumbent.
  const int epoch_len = 20;
  const int epochs = std::max(1, (iterations + epoch_len - 1) / epoch_len);
  double step_size = 0.5 * width;

  for (int e = 0; e < epochs; ++e) {
    x = best;
    std::vector<double> avg(n, 0.0);
    for (int k = 0; k < epoch_len; ++k) {
      std::size_t active = 0;
      min_surrogate_value(surrogates, x, &active);
      const QuadraticSurrogate& s = surrogates[active];
      std::vector<double> sub(n, 0.0);
      double norm = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double g = s.gradient[i];
        for (std::size_t c = 0; c < n; ++c) g += s.hess_minus(i, c) * x[c];
        sub[i] = g;
        norm += g * g;
      }
      norm = std::sqrt(norm);
      if (norm < 1e-15) break;  // smooth interior maximum of the active piece
      for (std::size_t i = 0; i < n; ++i) x[i] += step_size * sub[i] / norm;
      clip(x);
      const double v = min_surrogate_value(surrogates, x);
      if (v > best_value) {
        best_value = v;
        best = x;
      }
      for (std::size_t i = 0; i < n; ++i) {
        avg[i] += (x[i] - avg[i]) / static_cast<double>(k + 1);
      }
    }
    clip(avg);
    const double avg_value = min_surrogate_value(surrogates, avg);
    if (avg_value > best_value) {
      best_value = avg_value;
      best = avg;
    }
    step_size *= 0.65;
  }

  if (best_value < zero_value) {
    best.assign(n, 0.0);
    best_value = zero_value;
  }
  return {best, best_value};
}

}  // namespace qrobust
