#include "sfhf/rng.hpp"

#include <cmath>
#include <numbers>

namespace sfhf {

// Box-Muller; u1 is kept away from zero so log() stays finite.
double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Vector Rng::normal_vector(std::size_t dim) {
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = normal();
  return v;
}

Vector Rng::uniform_vector(std::size_t dim, double lo, double hi) {
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
  return v;
}

}  // namespace sfhf
