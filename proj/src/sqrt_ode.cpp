#include "sfhf/sqrt_ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sfhf/errors.hpp"
#include "sfhf/krylov.hpp"

namespace sfhf {

void SqrtApplyConfig::validate() const {
  if (rk_steps < 1) throw Error("sqrt.rk_steps must be >= 1");
  if (!(inner_tol > 0.0)) throw Error("sqrt.inner_tol must be positive");
  if (inner_max_iters < 1) throw Error("sqrt.inner_max_iters must be >= 1");
  if (!(norm_target > 0.0 && norm_target < 1.0)) throw Error("sqrt.norm_target must lie in (0, 1)");
  if (!(norm_safety >= 1.0)) throw Error("sqrt.norm_safety must be >= 1");
  if (norm_power_iters < 1) throw Error("sqrt.norm_power_iters must be >= 1");
  if (!(grading >= 1.0) || !std::isfinite(grading)) throw Error("sqrt.grading must be >= 1");
}

namespace {

// Work shared by the RHS evaluations of one integration.
struct RhsWorkspace {
  explicit RhsWorkspace(std::size_t m) : rhs(m) {}
  Vector rhs;  // (I - A) x
  CgWorkspace cg;
  int cg_iters = 0;
  std::uint64_t cg_applies = 0;
  int evaluations = 0;
  double worst_residual = 0.0;
};

// Solves (t A + (1-t) I) s = (I - A) x. `s` holds the warm start on entry.
void solve_rhs_system(const SymmetricOperator& opA, double t, const Vector& x, Vector& s,
                      const SqrtApplyConfig& cfg, RhsWorkspace& ws) {
  opA.apply(x, ws.rhs);
  ws.rhs.assign_lincomb(1.0, x, -1.0, ws.rhs);
  const SymmetricOperator system = shift_blend(opA, t);
  const CgStats st = cg_solve_inplace(system, ws.rhs, s, cfg.inner_tol, cfg.inner_max_iters, ws.cg);
  ws.cg_iters += st.iterations_used;
  ws.cg_applies += st.operator_applies;
  ++ws.evaluations;
  if (st.final_relative_residual > ws.worst_residual) ws.worst_residual = st.final_relative_residual;
  if (!st.converged) {
    std::ostringstream msg;
    msg << "sqrt ODE right-hand side: inner CG did not reach tol " << cfg.inner_tol << " at t = " << t
        << " (relative residual " << st.final_relative_residual << " after "
        << st.iterations_used << " iterations)";
    throw ConvergenceError(msg.str());
  }
}

}  // namespace

Vector ode_rhs(const SymmetricOperator& opA, double t, const Vector& x, const SqrtApplyConfig& cfg) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error("ode_rhs: t must lie in [0, 1]");
  if (x.dim() != opA.dim()) throw DimensionError("ode_rhs: vector dimension mismatch");
  RhsWorkspace ws(x.dim());
  Vector s(x.dim());
  solve_rhs_system(opA, t, x, s, cfg, ws);
  s.scale(-0.5);
  return s;
}

SqrtApplyResult sqrt_apply(const SymmetricOperator& opA, const Vector& v,
                           const SqrtApplyConfig& cfg) {
  cfg.validate();
  if (v.dim() != opA.dim()) throw DimensionError("sqrt_apply: vector dimension mismatch");
  require_finite(v, "sqrt_apply: input");
  const std::uint64_t applies_before = opA.applications();
  const std::size_t m = v.dim();

  SqrtApplyResult out;
  const double rho =
      cfg.norm_safety * power_iteration_norm(opA, cfg.norm_power_iters, cfg.power_seed);
  if (rho == 0.0) {
    out.result = Vector(m);
    out.total_operator_applies = opA.applications() - applies_before;
    return out;
  }
  const double c = rho / cfg.norm_target;
  const SymmetricOperator scaled_op = scaled(opA, 1.0 / c);

  const double p = cfg.grading;
  const auto time_at = [p](double s) { return 1.0 - std::pow(1.0 - s, p); };
  const auto time_rate = [p](double s) { return p * std::pow(1.0 - s, p - 1.0); };

  // Derivative in s at (s, x) is dt/ds * (-1/2) * solve. `solution` carries
  // the last raw solve as the warm start for the next one.
  RhsWorkspace ws(m);
  Vector solution(m);
  const auto stage = [&](double s, const Vector& x) -> double {
    const double rate = time_rate(s);
    if (rate == 0.0) return 0.0;  // dt/ds vanishes at s = 1 for p > 1
    solve_rhs_system(scaled_op, std::min(1.0, time_at(s)), x, solution, cfg, ws);
    return -0.5 * rate;
  };

  Vector x(v);
  Vector acc(m);
  Vector probe(m);
  const double h = 1.0 / cfg.rk_steps;
  for (int step = 0; step < cfg.rk_steps; ++step) {
    const double s0 = step * h;
    try {
      // k_i = coef_i * solution; acc collects x + h/6 (k1 + 2k2 + 2k3 + k4).
      acc.assign(x);
      double coef = stage(s0, x);
      acc.add_scaled(h / 6.0 * coef, solution);
      probe.assign_lincomb(1.0, x, 0.5 * h * coef, solution);

      coef = stage(s0 + 0.5 * h, probe);
      acc.add_scaled(h / 3.0 * coef, solution);
      probe.assign_lincomb(1.0, x, 0.5 * h * coef, solution);

      coef = stage(s0 + 0.5 * h, probe);
      acc.add_scaled(h / 3.0 * coef, solution);
      probe.assign_lincomb(1.0, x, h * coef, solution);

      coef = stage(step + 1 == cfg.rk_steps ? 1.0 : s0 + h, probe);
      acc.add_scaled(h / 6.0 * coef, solution);
    } catch (const NonFiniteError& e) {
      std::ostringstream msg;
      msg << "sqrt_apply: non-finite ODE state at RK step " << step << ": " << e.what();
      throw NonFiniteError(msg.str());
    }
    std::swap(x, acc);
  }

  x.scale(std::sqrt(c));
  out.result = std::move(x);
  out.total_operator_applies = opA.applications() - applies_before;
  out.scale_used = c;
  out.inner_cg_iters = ws.cg_iters;
  out.inner_cg_applies = ws.cg_applies;
  out.rhs_evaluations = ws.evaluations;
  out.worst_inner_residual = ws.worst_residual;
  return out;
}

}  // namespace sfhf
