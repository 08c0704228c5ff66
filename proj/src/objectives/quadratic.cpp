#include <cmath>
#include <string>
#include <vector>

#include "sfhf/errors.hpp"
#include "sfhf/kernels.hpp"
#include "sfhf/objectives.hpp"
#include "sfhf/rng.hpp"

namespace sfhf {
namespace {

// Orthonormal rows from a Gaussian matrix by modified Gram-Schmidt (twice,
// for orthogonality to working precision). Row-major m x m.
std::vector<double> random_orthogonal(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> q(m * m);
  for (double& x : q) x = rng.normal();
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < m; ++i) {
    double* qi = q.data() + i * m;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        const double* qj = q.data() + j * m;
        k.axpy(-k.dot(qj, qi, m), qj, qi, m);
      }
    }
    const double n = std::sqrt(k.dot(qi, qi, m));
    k.scal(1.0 / n, qi, m);
  }
  return q;
}

class Quadratic final : public Objective {
 public:
  explicit Quadratic(const QuadraticSpec& spec)
      : lambda_(spec.eigenvalues),
        b_(spec.linear_term.empty() ? Vector(spec.eigenvalues.dim()) : spec.linear_term) {
    require_same_dim(lambda_, b_, "make_quadratic: linear_term vs eigenvalues");
    if (spec.rotation_seed) u_ = random_orthogonal(dim(), *spec.rotation_seed);
  }

  std::size_t dim() const override { return lambda_.dim(); }
  std::string_view name() const override { return "quadratic"; }

  double eval(const Vector& theta) const override {
    check_point(theta, "eval");
    Vector z = to_eigenbasis(theta);
    double quad = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) quad += lambda_[i] * z[i] * z[i];
    const double f = 0.5 * quad - dot(b_, theta);
    if (!std::isfinite(f)) throw NonFiniteError("quadratic::eval: non-finite value");
    return f;
  }

  Vector grad(const Vector& theta) const override {
    check_point(theta, "grad");
    Vector g(dim());
    hessian_times(theta, g);
    g.add_scaled(-1.0, b_);
    return g;
  }

  void hvp(const Vector&, const Vector& v, Vector& out) const override {
    hessian_times(v, out);
  }

 private:
  // z = U' x
  Vector to_eigenbasis(const Vector& x) const {
    if (u_.empty()) return x;
    const auto& k = kernels::active();
    const std::size_t m = dim();
    Vector z(m);
    for (std::size_t i = 0; i < m; ++i) k.axpy(x[i], u_.data() + i * m, z.data(), m);
    return z;
  }

  // out = U diag(lambda) U' x
  void hessian_times(const Vector& x, Vector& out) const {
    const auto& k = kernels::active();
    const std::size_t m = dim();
    if (u_.empty()) {
      k.hadamard(lambda_.data(), x.data(), out.data(), m);
    } else {
      Vector z = to_eigenbasis(x);
      k.hadamard(lambda_.data(), z.data(), z.data(), m);
      for (std::size_t i = 0; i < m; ++i) out[i] = k.dot(u_.data() + i * m, z.data(), m);
    }
    require_finite(out, "quadratic::hvp");
  }

  Vector lambda_;
  Vector b_;
  std::vector<double> u_;  // row-major, empty for U = I
};

class DiagRankOne final : public Objective {
 public:
  DiagRankOne(const Vector& d, const Vector& u, double sigma, const Vector& b)
      : d_(d), u_(u), sigma_(sigma), b_(b.empty() ? Vector(d.dim()) : b) {
    require_same_dim(d_, u_, "make_diag_rank_one");
    require_same_dim(d_, b_, "make_diag_rank_one");
  }

  std::size_t dim() const override { return d_.dim(); }
  std::string_view name() const override { return "diag-rank1"; }

  double eval(const Vector& theta) const override {
    check_point(theta, "eval");
    Vector ht(dim());
    hvp(theta, theta, ht);
    return 0.5 * dot(theta, ht) - dot(b_, theta);
  }

  Vector grad(const Vector& theta) const override {
    check_point(theta, "grad");
    Vector g(dim());
    hvp(theta, theta, g);
    g.add_scaled(-1.0, b_);
    return g;
  }

  void hvp(const Vector&, const Vector& v, Vector& out) const override {
    kernels::active().hadamard(d_.data(), v.data(), out.data(), dim());
    out.add_scaled(sigma_ * dot(u_, v), u_);
  }

 private:
  Vector d_;
  Vector u_;
  double sigma_;
  Vector b_;
};

}  // namespace

ObjectivePtr make_quadratic(const QuadraticSpec& spec) {
  if (spec.eigenvalues.empty()) throw DimensionError("make_quadratic: empty spectrum");
  return std::make_shared<Quadratic>(spec);
}

ObjectivePtr make_diag_rank_one(const Vector& diag, const Vector& u, double sigma,
                                const Vector& linear_term) {
  if (diag.empty()) throw DimensionError("make_diag_rank_one: empty diagonal");
  return std::make_shared<DiagRankOne>(diag, u, sigma, linear_term);
}

}  // namespace sfhf
