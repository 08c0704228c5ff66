#pragma once
//
// A^(1/2) v for a matrix-free symmetric PSD operator A.
//
// x(t) = (tA + (1-t)I)^(1/2) v solves
//
//     x'(t) = -1/2 (tA + (1-t)I)^(-1) (I - A) x(t),   x(0) = v,
//
// so x(1) = A^(1/2) v. Each right-hand side costs one apply of (I - A) and
// one CG solve with (tA + (1-t)I). The operator is first rescaled so its
// norm is below `norm_target`, and the result scaled back.
//
// The equation becomes stiff near t = 1 when A has small eigenvalues (the
// rate is about 1/(2 lambda_min)). Integration therefore runs in a graded
// variable s with t = 1 - (1-s)^p and `rk_steps` uniform classical RK4
// steps in s; p = 1 is the plain uniform grid in t.
//
#include <cstdint>

#include "sfhf/operator.hpp"
#include "sfhf/vector.hpp"

namespace sfhf {

struct SqrtApplyConfig {
  int rk_steps = 20;
  double inner_tol = 1e-8;
  int inner_max_iters = 250;
  double norm_target = 0.9;
  double norm_safety = 1.05;
  int norm_power_iters = 100;
  /// Grading exponent p >= 1 of the time map t = 1 - (1-s)^p.
  double grading = 4.0;
  std::uint64_t power_seed = 0x5eed;

  /// Throws Error naming the offending field.
  void validate() const;
};

struct SqrtApplyResult {
  Vector result;
  /// Applies of the caller's (unscaled) operator: power iteration, every
  /// (I - A) product and every inner CG iteration.
  std::uint64_t total_operator_applies = 0;
  /// Rescale factor c; the integrated operator was A / c.
  double scale_used = 0.0;
  int inner_cg_iters = 0;
  /// Applies spent inside the inner CG solves, residual recomputations included.
  std::uint64_t inner_cg_applies = 0;
  int rhs_evaluations = 0;
  double worst_inner_residual = 0.0;
};

/// -1/2 s with (t A + (1-t) I) s = (I - A) x. `opA` must already be rescaled.
/// Throws ConvergenceError if the inner CG misses inner_tol.
Vector ode_rhs(const SymmetricOperator& opA, double t, const Vector& x, const SqrtApplyConfig& cfg);

SqrtApplyResult sqrt_apply(const SymmetricOperator& opA, const Vector& v, const SqrtApplyConfig& cfg);

}  // namespace sfhf
