#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "qrobust/errors.hpp"

namespace qrobust {

// Axis-aligned box: per-component closed interval [lower[i], upper[i]].
// Used both for the control feasible set and for uncertainty sets.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  Box() = default;
  Box(std::vector<double> lo, std::vector<double> hi)
      : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size()) {
      throw InvalidArgument("Box: bound arrays differ in length");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (lower[i] > upper[i]) {
        throw InvalidArgument("Box: lower bound above upper bound");
      }
    }
  }

  static Box uniform(std::size_t dim, double lo, double hi) {
    return Box(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
  }

  std::size_t dim() const { return lower.size(); }

  bool contains(const std::vector<double>& point, double tol = 0.0) const {
    if (point.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i) {
      if (point[i] < lower[i] - tol || point[i] > upper[i] + tol) return false;
    }
    return true;
  }

  std::vector<double> clip(std::vector<double> point) const {
    for (std::size_t i = 0; i < dim() && i < point.size(); ++i) {
      point[i] = std::clamp(point[i], lower[i], upper[i]);
    }
    return point;
  }

  std::vector<double> center() const {
    std::vector<double> c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (lower[i] + upper[i]);
    return c;
  }

  bool operator==(const Box&) const = default;
};

}  // namespace qrobust
