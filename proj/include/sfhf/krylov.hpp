#pragma once

#include <cstdint>
#include <optional>

#include "sfhf/operator.hpp"
#include "sfhf/vector.hpp"

namespace sfhf {

struct CgResult {
  Vector solution;
  int iterations_used = 0;
  /// |A x - b| / |b|, recomputed from scratch at exit.
  double final_relative_residual = 0.0;
  bool converged = false;
  /// Operator applies spent, including residual recomputations.
  std::uint64_t operator_applies = 0;
};

struct CgStats {
  int iterations_used = 0;
  double final_relative_residual = 0.0;
  bool converged = false;
  std::uint64_t operator_applies = 0;
};

/// Residual is recomputed from scratch every this many iterations.
inline constexpr int kCgResidualRefresh = 50;

/// Unpreconditioned conjugate gradients for symmetric positive (semi)definite
/// systems. Stops once |A x - b| / |b| <= tol (checked on the explicit
/// residual) or after max_iters iterations, keeping the last iterate.
///
/// Throws IndefiniteError when a search direction has p.Ap <= 0, and
/// NonFiniteError on a non-finite iterate.
CgResult cg_solve(const SymmetricOperator& op, const Vector& b, double tol, int max_iters,
                  const std::optional<Vector>& x0 = std::nullopt);

/// Work vectors for repeated solves of one dimension; sized on first use.
struct CgWorkspace {
  Vector r, p, ap;
};

/// In-place variant: `x` holds the starting guess on entry and the iterate on
/// exit. Allocates three work vectors.
CgStats cg_solve_inplace(const SymmetricOperator& op, const Vector& b, Vector& x, double tol,
                         int max_iters);
/// As above, reusing `ws` instead of allocating.
CgStats cg_solve_inplace(const SymmetricOperator& op, const Vector& b, Vector& x, double tol,
                         int max_iters, CgWorkspace& ws);

}  // namespace sfhf
