#include "sfhf/krylov.hpp"

#include <cmath>
#include <sstream>

#include "sfhf/errors.hpp"

namespace sfhf {
namespace {

bool is_zero(const Vector& v) {
  for (double x : v.values())
    if (x != 0.0) return false;
  return true;
}

// r = b - A x
void true_residual(const SymmetricOperator& op, const Vector& b, const Vector& x, Vector& r) {
  op.apply(x, r);
  r.assign_lincomb(1.0, b, -1.0, r);
}

}  // namespace

CgStats cg_solve_inplace(const SymmetricOperator& op, const Vector& b, Vector& x, double tol,
                         int max_iters) {
  CgWorkspace ws;
  return cg_solve_inplace(op, b, x, tol, max_iters, ws);
}

CgStats cg_solve_inplace(const SymmetricOperator& op, const Vector& b, Vector& x, double tol,
                         int max_iters, CgWorkspace& ws) {
  if (b.dim() != op.dim()) throw DimensionError("cg_solve: right-hand side dimension mismatch");
  require_same_dim(b, x, "cg_solve: initial guess");
  if (!(tol > 0.0)) throw Error("cg_solve: tol must be positive");
  if (max_iters < 1) throw Error("cg_solve: max_iters must be >= 1");
  require_finite(b, "cg_solve: right-hand side");
  require_finite(x, "cg_solve: initial guess");

  const std::uint64_t applies_before = op.applications();
  CgStats stats;
  const double bnorm = norm(b);
  if (bnorm == 0.0) {
    x.fill(0.0);
    stats.converged = true;
    return stats;
  }

  if (ws.r.dim() != b.dim()) ws = CgWorkspace{Vector(b.dim()), Vector(b.dim()), Vector(b.dim())};
  Vector& r = ws.r;
  Vector& p = ws.p;
  Vector& ap = ws.ap;
  if (is_zero(x))
    r.assign(b);
  else
    true_residual(op, b, x, r);
  double rr = dot(r, r);
  double rel = std::sqrt(rr) / bnorm;
  if (rel <= tol) {
    stats.final_relative_residual = rel;
    stats.converged = true;
    stats.operator_applies = op.applications() - applies_before;
    return stats;
  }

  p.assign(r);
  bool residual_is_explicit = true;
  int it = 0;
  while (it < max_iters) {
    ++it;
    op.apply(p, ap);
    const double curvature = dot(p, ap);
    if (!(curvature > 0.0)) {
      std::ostringstream msg;
      msg << "cg_solve: non-positive curvature p.Ap = " << curvature << " at iteration " << it
          << " (operator is not positive definite)";
      throw IndefiniteError(msg.str());
    }
    const double step = rr / curvature;
    if (!std::isfinite(step)) throw NonFiniteError("cg_solve: non-finite step length");
    x.add_scaled(step, p);
    if (it % kCgResidualRefresh == 0) {
      true_residual(op, b, x, r);
      residual_is_explicit = true;
    } else {
      r.add_scaled(-step, ap);
      residual_is_explicit = false;
    }
    double rr_next = dot(r, r);
    rel = std::sqrt(rr_next) / bnorm;
    if (rel <= tol) {
      if (!residual_is_explicit) {
        // The recursive residual may have drifted; confirm before stopping.
        true_residual(op, b, x, r);
        residual_is_explicit = true;
        rr_next = dot(r, r);
        rel = std::sqrt(rr_next) / bnorm;
      }
      if (rel <= tol) break;
      // Restart from the explicit residual.
      p.assign(r);
      rr = rr_next;
      continue;
    }
    p.assign_lincomb(1.0, r, rr_next / rr, p);
    rr = rr_next;
  }

  if (!residual_is_explicit) {
    true_residual(op, b, x, r);
    rel = norm(r) / bnorm;
  }
  stats.iterations_used = it;
  stats.final_relative_residual = rel;
  stats.converged = rel <= tol;
  stats.operator_applies = op.applications() - applies_before;
  return stats;
}

CgResult cg_solve(const SymmetricOperator& op, const Vector& b, double tol, int max_iters,
                  const std::optional<Vector>& x0) {
  Vector x = x0 ? *x0 : Vector(b.dim());
  const CgStats s = cg_solve_inplace(op, b, x, tol, max_iters);
  return CgResult{std::move(x), s.iterations_used, s.final_relative_residual, s.converged,
                  s.operator_applies};
}

}  // namespace sfhf
