#pragma once

#include <cstdint>
#include <random>

#include "sfhf/vector.hpp"

namespace sfhf {

/// Deterministic random source. Built on mt19937_64 with hand-written
/// uniform/normal transforms so streams are identical across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Vector normal_vector(std::size_t dim);
  Vector uniform_vector(std::size_t dim, double lo, double hi);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sfhf
