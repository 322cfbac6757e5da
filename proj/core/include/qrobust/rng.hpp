#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qrobust/box.hpp"

namespace qrobust {

// Seeded 64-bit generator with a platform-independent uniform double mapping.
// std::uniform_real_distribution is implementation-defined, so draws go
// through the explicit 53-bit construction instead.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::vector<double> uniform_in(const Box& box) {
    std::vector<double> point(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) {
      point[i] = uniform(box.lower[i], box.upper[i]);
    }
    return point;
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace qrobust
