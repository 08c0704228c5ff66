#include "sfhf/operator.hpp"

#include <cmath>
#include <string>

#include "sfhf/errors.hpp"
#include "sfhf/kernels.hpp"
#include "sfhf/rng.hpp"

namespace sfhf {

SymmetricOperator::SymmetricOperator(std::size_t dim, ApplyFn fn)
    : state_(std::make_shared<State>(State{dim, std::move(fn)})) {
  if (dim == 0) throw DimensionError("SymmetricOperator: dimension must be positive");
  if (!state_->fn) throw Error("SymmetricOperator: empty apply function");
}

void SymmetricOperator::apply(const Vector& in, Vector& out) const {
  if (in.dim() != dim() || out.dim() != dim())
    throw DimensionError("SymmetricOperator::apply: expected dimension " + std::to_string(dim()));
  ++state_->applications;
  state_->fn(in, out);
  require_finite(out, "SymmetricOperator::apply");
}

void SymmetricOperator::apply_nested(const Vector& in, Vector& out) const {
  if (in.dim() != dim() || out.dim() != dim())
    throw DimensionError("SymmetricOperator::apply: expected dimension " + std::to_string(dim()));
  ++state_->applications;
  state_->fn(in, out);
}

namespace detail {
struct OperatorAccess {
  static void apply(const SymmetricOperator& op, const Vector& in, Vector& out) {
    op.apply_nested(in, out);
  }
};
}  // namespace detail

namespace {
void apply_inner(const SymmetricOperator& op, const Vector& in, Vector& out) {
  detail::OperatorAccess::apply(op, in, out);
}
}  // namespace

Vector SymmetricOperator::apply(const Vector& in) const {
  Vector out(dim());
  apply(in, out);
  return out;
}

SymmetricOperator identity_operator(std::size_t dim) {
  return SymmetricOperator(dim, [](const Vector& in, Vector& out) { out.assign(in); });
}

SymmetricOperator diagonal_operator(const Vector& diag) {
  return SymmetricOperator(diag.dim(), [diag](const Vector& in, Vector& out) {
    kernels::active().hadamard(diag.data(), in.data(), out.data(), in.dim());
  });
}

SymmetricOperator compose_square(const SymmetricOperator& op) {
  // Scratch is allocated on first use so building the operator costs nothing.
  auto scratch = std::make_shared<Vector>();
  return SymmetricOperator(op.dim(), [op, scratch](const Vector& in, Vector& out) {
    if (scratch->empty()) *scratch = Vector(op.dim());
    apply_inner(op, in, *scratch);
    apply_inner(op, *scratch, out);
  });
}

SymmetricOperator shift_blend(const SymmetricOperator& op, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error("shift_blend: t must lie in [0, 1]");
  return SymmetricOperator(op.dim(), [op, t](const Vector& in, Vector& out) {
    apply_inner(op, in, out);
    out.assign_lincomb(t, out, 1.0 - t, in);
  });
}

SymmetricOperator scaled(const SymmetricOperator& op, double scale) {
  if (!std::isfinite(scale)) throw NonFiniteError("scaled: non-finite factor");
  return SymmetricOperator(op.dim(), [op, scale](const Vector& in, Vector& out) {
    apply_inner(op, in, out);
    out.scale(scale);
  });
}

SymmetricOperator add_identity(const SymmetricOperator& op, double shift) {
  if (!std::isfinite(shift)) throw NonFiniteError("add_identity: non-finite shift");
  return SymmetricOperator(op.dim(), [op, shift](const Vector& in, Vector& out) {
    apply_inner(op, in, out);
    if (shift != 0.0) out.add_scaled(shift, in);
  });
}

double power_iteration_norm(const SymmetricOperator& op, int iters, std::uint64_t seed) {
  if (iters < 1) throw Error("power_iteration_norm: iters must be >= 1");
  Vector v;
  for (int attempt = 0; attempt < 2 && v.empty(); ++attempt) {
    Rng rng(seed + static_cast<std::uint64_t>(attempt) * 0x9e3779b97f4a7c15ULL);
    Vector start = rng.normal_vector(op.dim());
    if (norm(start) > 0.0) v = std::move(start);
  }
  if (v.empty()) throw Error("power_iteration_norm: zero start vector after re-seeding");

  Vector w(op.dim());
  double estimate = 0.0;
  for (int k = 0; k < iters; ++k) {
    op.apply(v, w);
    const double vv = dot(v, v);
    estimate = dot(v, w) / vv;
    const double wn = norm(w);
    if (!std::isfinite(estimate) || !std::isfinite(wn))
      throw NonFiniteError("power_iteration_norm: non-finite iterate");
    if (wn == 0.0) return 0.0;
    // Next iterate is w / |w|; the remaining applies only refine the quotient.
    std::swap(v, w);
    v.scale(1.0 / wn);
  }
  return estimate;
}

}  // namespace sfhf
