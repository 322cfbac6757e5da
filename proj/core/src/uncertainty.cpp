#include "qrobust/uncertainty.hpp"

#include <cmath>

namespace qrobust {

SampleSet sample_grid(const Box& box, int points_per_axis) {
  if (box.dim() == 0) throw InvalidArgument("sample_grid: empty box");
  if (points_per_axis < 1) {
    throw InvalidArgument("sample_grid: points_per_axis must be positive");
  }

  std::vector<std::vector<double>> axes(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const double lo = box.lower[i];
    const double hi = box.upper[i];
    if (lo == hi) {
      axes[i] = {lo};
    } else if (points_per_axis == 1) {
      axes[i] = {0.5 * (lo + hi)};
    } else {
      axes[i].resize(points_per_axis);
      for (int k = 0; k < points_per_axis; ++k) {
        axes[i][k] = lo + (hi - lo) * static_cast<double>(k) /
                              static_cast<double>(points_per_axis - 1);
      }
      axes[i].back() = hi;  // corner exact despite rounding
    }
  }

  std::size_t total = 1;
  for (const auto& axis : axes) {
    total *= axis.size();
    if (total > 10000) {
      throw TooManySamples("sample_grid: more than 10^4 grid points");
    }
  }

  SampleSet set;
  set.provenance = Provenance::grid;
  set.samples.reserve(total);
  std::vector<std::size_t> idx(box.dim(), 0);
  for (std::size_t count = 0; count < total; ++count) {
    std::vector<double> point(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) point[i] = axes[i][idx[i]];
    set.samples.push_back(std::move(point));
    // Odometer increment, axis 0 slowest.
    for (std::size_t i = box.dim(); i-- > 0;) {
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
    }
  }
  return set;
}

WorstAverage worst_and_average(const FidelityEvaluator& eval,
                               const std::vector<double>& theta,
                               const SampleSet& samples) {
  if (samples.samples.empty()) {
    throw EmptySampleSet("worst_and_average: no samples");
  }
  WorstAverage out;
  out.worst = 2.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.samples.size(); ++i) {
    const double f = eval.fidelity(theta, samples.samples[i]);
    sum += f;
    if (f < out.worst) {
      out.worst = f;
      out.argmin = i;
    }
  }
  out.average = sum / static_cast<double>(samples.samples.size());
  return out;
}

WorstAverage worst_and_average(const QaoaInstance& instance,
                               const ControlVector& theta,
                               const SampleSet& samples) {
  FidelityEvaluator eval(instance);
  return worst_and_average(eval, theta.angles, samples);
}

namespace {

// Golden-section minimization of f over [lo, hi].
template <typename F>
std::pair<double, double> golden_min(const F& f, double lo, double hi,
                                     int iters) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return (f1 <= f2) ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace

std::vector<double> adversarial_sample(const FidelityEvaluator& eval,
                                       const std::vector<double>& theta,
                                       const Box& box, int refine_iters,
                                       int points_per_axis) {
  const SampleSet grid = sample_grid(box, points_per_axis);
  std::vector<double> best = grid.samples.front();
  double best_f = eval.fidelity(theta, best);
  for (std::size_t i = 1; i < grid.samples.size(); ++i) {
    const double f = eval.fidelity(theta, grid.samples[i]);
    if (f < best_f) {
      best_f = f;
      best = grid.samples[i];
    }
  }

  std::vector<double> half_width(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const double span = box.upper[i] - box.lower[i];
    half_width[i] =
        span / static_cast<double>(std::max(points_per_axis - 1, 1));
  }

  std::vector<double> point = best;
  for (int round = 0; round < refine_iters; ++round) {
    for (std::size_t i = 0; i < box.dim(); ++i) {
      if (box.lower[i] == box.upper[i]) continue;
      const double lo = std::max(box.lower[i], point[i] - half_width[i]);
      const double hi = std::min(box.upper[i], point[i] + half_width[i]);
      auto line = [&](double x) {
        std::vector<double> probe = point;
        probe[i] = x;
        return eval.fidelity(theta, probe);
      };
      const auto [x, fx] = golden_min(line, lo, hi, 20);
      if (fx < best_f) {
        best_f = fx;
        point[i] = x;
        best = point;
      } else {
        point = best;
      }
    }
    for (double& w : half_width) w *= 0.5;
  }
  return best;
}

}  // namespace qrobust
