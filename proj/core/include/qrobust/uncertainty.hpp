#pragma once

#include <cstddef>
#include <vector>

#include "qrobust/box.hpp"
#include "qrobust/qaoa.hpp"

namespace qrobust {

enum class Provenance { grid, random, adversarial };

// Finite realization {δ_i} of an uncertainty set.
struct SampleSet {
  std::vector<std::vector<double>> samples;
  Provenance provenance = Provenance::grid;

  std::size_t size() const { return samples.size(); }
};

// Cartesian grid over the box, corners included, axis 0 slowest. Degenerate
// axes (lower == upper) contribute a single point. points_per_axis == 1
// yields the axis midpoint. Throws TooManySamples above 10^4 points.
SampleSet sample_grid(const Box& box, int points_per_axis);

struct WorstAverage {
  double worst = 0.0;
  double average = 0.0;
  std::size_t argmin = 0;  // ties broken by lowest index
};

WorstAverage worst_and_average(const FidelityEvaluator& eval,
                               const std::vector<double>& theta,
                               const SampleSet& samples);
WorstAverage worst_and_average(const QaoaInstance& instance,
                               const ControlVector& theta,
                               const SampleSet& samples);

// Approximate argmin_δ F(θ, δ): coarse grid scan followed by rounds of
// per-coordinate golden-section refinement with the bracket halved each
// round. The result never exceeds the best scanned grid value.
std::vector<double> adversarial_sample(const FidelityEvaluator& eval,
                                       const std::vector<double>& theta,
                                       const Box& box, int refine_iters,
                                       int points_per_axis = 9);

}  // namespace qrobust
