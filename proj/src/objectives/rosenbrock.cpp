#include <cmath>
#include <string>

#include "sfhf/errors.hpp"
#include "sfhf/objectives.hpp"

namespace sfhf {
namespace {

// Pairs (x, y) = (theta[2i], theta[2i+1]) are independent, so the Hessian is
// block diagonal with 2x2 blocks
//   [ 1200x^2 - 400y + 2   -400x ]
//   [ -400x                  200 ]
class Rosenbrock final : public Objective {
 public:
  explicit Rosenbrock(std::size_t m) : m_(m) {}

  std::size_t dim() const override { return m_; }
  std::string_view name() const override { return "rosenbrock"; }

  double eval(const Vector& theta) const override {
    check_point(theta, "eval");
    double f = 0.0;
    for (std::size_t i = 0; i < m_; i += 2) {
      const double x = theta[i], y = theta[i + 1];
      const double r = y - x * x;
      f += 100.0 * r * r + (1.0 - x) * (1.0 - x);
    }
    if (!std::isfinite(f)) throw NonFiniteError("rosenbrock::eval: non-finite value");
    return f;
  }

  Vector grad(const Vector& theta) const override {
    check_point(theta, "grad");
    Vector g(m_);
    for (std::size_t i = 0; i < m_; i += 2) {
      const double x = theta[i], y = theta[i + 1];
      const double r = y - x * x;
      g[i] = -400.0 * x * r - 2.0 * (1.0 - x);
      g[i + 1] = 200.0 * r;
    }
    require_finite(g, "rosenbrock::grad");
    return g;
  }

  void hvp(const Vector& theta, const Vector& v, Vector& out) const override {
    check_point(theta, "hvp");
    for (std::size_t i = 0; i < m_; i += 2) {
      const double x = theta[i], y = theta[i + 1];
      const double hxx = 1200.0 * x * x - 400.0 * y + 2.0;
      const double hxy = -400.0 * x;
      out[i] = hxx * v[i] + hxy * v[i + 1];
      out[i + 1] = hxy * v[i] + 200.0 * v[i + 1];
    }
    require_finite(out, "rosenbrock::hvp");
  }

 private:
  std::size_t m_;
};

}  // namespace

ObjectivePtr make_rosenbrock(std::size_t dim) {
  if (dim < 2 || dim % 2 != 0)
    throw DimensionError("make_rosenbrock: dimension must be even and >= 2, got " +
                         std::to_string(dim));
  return std::make_shared<Rosenbrock>(dim);
}

}  // namespace sfhf
