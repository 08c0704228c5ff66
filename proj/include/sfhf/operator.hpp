#pragma once
//
// Matrix-free symmetric linear operators.
//
// A SymmetricOperator is a cheap handle: copies share the same apply function
// and the same application tally. One instance (and its copies) must be used
// by one thread at a time; distinct operators may run concurrently.
//
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>

#include "sfhf/vector.hpp"

namespace sfhf {

namespace detail {
struct OperatorAccess;
}

class SymmetricOperator {
 public:
  /// Writes A*in into out. `out` is already sized and never aliases `in`.
  using ApplyFn = std::function<void(const Vector& in, Vector& out)>;

  SymmetricOperator(std::size_t dim, ApplyFn fn);

  std::size_t dim() const noexcept { return state_->dim; }

  /// out = A*in; bumps the tally by one. Throws NonFiniteError if out has a
  /// non-finite entry.
  void apply(const Vector& in, Vector& out) const;
  Vector apply(const Vector& in) const;

  std::uint64_t applications() const noexcept { return state_->applications; }

 private:
  friend struct detail::OperatorAccess;
  // Apply without the output check, for operators wrapped by another one:
  // non-finite values propagate through the linear wrappers and are caught
  // by the outermost apply.
  void apply_nested(const Vector& in, Vector& out) const;

  struct State {
    std::size_t dim;
    ApplyFn fn;
    std::uint64_t applications = 0;
  };
  std::shared_ptr<State> state_;
};

SymmetricOperator identity_operator(std::size_t dim);
SymmetricOperator diagonal_operator(const Vector& diag);

/// v -> op(op(v)). Symmetric PSD; each apply costs two applies of `op`.
SymmetricOperator compose_square(const SymmetricOperator& op);

/// v -> t*op(v) + (1-t)*v, t in [0, 1].
SymmetricOperator shift_blend(const SymmetricOperator& op, double t);

/// v -> scale*op(v).
SymmetricOperator scaled(const SymmetricOperator& op, double scale);

/// v -> op(v) + shift*v.
SymmetricOperator add_identity(const SymmetricOperator& op, double shift);

/// Largest eigenvalue of a symmetric PSD operator by normalized power
/// iteration from a seeded pseudo-random start. Returns the Rayleigh quotient
/// of the last iterate, which never exceeds the true value for PSD input.
/// Uses exactly `iters` applies. Returns 0 when the operator annihilates the
/// start vector.
double power_iteration_norm(const SymmetricOperator& op, int iters, std::uint64_t seed);

}  // namespace sfhf
