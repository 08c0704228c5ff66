#include "sfhf/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "sfhf/dense.hpp"
#include "sfhf/errors.hpp"
#include "sfhf/krylov.hpp"

namespace sfhf {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::GradientDescent: return "gd";
    case Method::NewtonDense: return "newton-dense";
    case Method::SfnDense: return "sfn-dense";
    case Method::Sfhf: return "sfhf";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::GradientDescent, Method::NewtonDense, Method::SfnDense, Method::Sfhf})
    if (method_name(m) == name) return m;
  return std::nullopt;
}

double default_alpha(Method m) { return m == Method::GradientDescent ? 1e-3 : 1.0; }

std::string_view stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "converged";
    case StopReason::Budget: return "budget";
    case StopReason::Failed: return "failed";
  }
  return "unknown";
}

void SfhfConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error("alpha must be positive");
  if (!(damping >= 0.0) || !std::isfinite(damping)) throw Error("damping must be >= 0");
  if (!(outer_cg_tol > 0.0)) throw Error("outer_cg_tol must be positive");
  if (outer_cg_max_iters < 1) throw Error("outer_cg_max_iters must be >= 1");
  if (max_outer_iters < 1) throw Error("max_outer_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw Error("grad_tol must be positive");
  sqrt_cfg.validate();
}

SfhfStep sfhf_step(const ObjectivePtr& obj, const Vector& theta, const SfhfConfig& cfg) {
  if (!obj) throw Error("sfhf_step: null objective");
  if (theta.dim() != obj->dim()) throw DimensionError("sfhf_step: theta dimension mismatch");
  SfhfStep out{Vector(theta.dim()), {}};
  const Vector g = obj->grad(theta);
  if (norm(g) == 0.0) return out;

  const SymmetricOperator hessian = as_hessian_operator(obj, theta);
  const SymmetricOperator squared = add_identity(compose_square(hessian), cfg.damping);

  SqrtApplyResult y = sqrt_apply(squared, g, cfg.sqrt_cfg);

  y.result.scale(-cfg.alpha);
  const CgStats outer =
      cg_solve_inplace(squared, y.result, out.step, cfg.outer_cg_tol, cfg.outer_cg_max_iters);
  require_finite(out.step, "sfhf_step");

  SfhfDiagnostics& d = out.diagnostics;
  d.inner_cg_iters = y.inner_cg_iters + outer.iterations_used;
  d.outer_cg_iters = outer.iterations_used;
  d.outer_cg_applies = outer.operator_applies;
  d.sqrt_operator_applies = y.total_operator_applies;
  d.sqrt_rhs_evaluations = y.rhs_evaluations;
  d.sqrt_inner_cg_applies = y.inner_cg_applies;
  d.squared_operator_applies = squared.applications();
  d.hessian_applies = hessian.applications();
  d.outer_cg_residual = outer.final_relative_residual;
  d.outer_cg_converged = outer.converged;
  d.worst_inner_residual = y.worst_inner_residual;
  d.sqrt_scale = y.scale_used;
  return out;
}

Vector gd_step(const Objective& obj, const Vector& theta, double alpha) {
  Vector step = obj.grad(theta);
  step.scale(-alpha);
  return step;
}

RunResult run(const ObjectivePtr& obj, const Vector& theta0, Method method, const SfhfConfig& cfg) {
  if (!obj) throw Error("run: null objective");
  if (theta0.dim() != obj->dim()) throw DimensionError("run: initial point dimension mismatch");
  cfg.validate();
  if ((method == Method::NewtonDense || method == Method::SfnDense) && obj->dim() > kDenseMaxDim)
    throw DimensionError("run: dense methods are limited to dimension " +
                         std::to_string(kDenseMaxDim));

  RunResult result;
  result.theta = theta0;
  Vector& theta = result.theta;
  using Clock = std::chrono::steady_clock;

  for (int k = 0;; ++k) {
    const auto start = Clock::now();
    double f = 0.0, gnorm = 0.0;
    Vector g;
    try {
      f = obj->eval(theta);
      g = obj->grad(theta);
      gnorm = norm(g);
    } catch (const Error& e) {
      result.stop_reason = StopReason::Failed;
      result.failure = e.what();
      break;
    }
    result.final_f = f;
    result.final_grad_norm = gnorm;
    if (gnorm <= cfg.grad_tol) {
      result.stop_reason = StopReason::Converged;
      break;
    }
    if (k == cfg.max_outer_iters) {
      result.stop_reason = StopReason::Budget;
      break;
    }

    TraceRecord rec;
    rec.iter = k;
    rec.f_value = f;
    rec.grad_norm = gnorm;
    try {
      Vector step;
      switch (method) {
        case Method::GradientDescent:
          step = gd_step(*obj, theta, cfg.alpha);
          break;
        case Method::NewtonDense:
          step = newton_dense_step(*obj, theta, cfg.alpha);
          rec.hessian_applies = obj->dim();
          break;
        case Method::SfnDense:
          step = sfn_dense_step(*obj, theta, cfg.alpha);
          rec.hessian_applies = obj->dim();
          break;
        case Method::Sfhf: {
          SfhfStep s = sfhf_step(obj, theta, cfg);
          step = std::move(s.step);
          rec.inner_cg_iters = s.diagnostics.inner_cg_iters;
          rec.sqrt_operator_applies = s.diagnostics.sqrt_operator_applies;
          rec.hessian_applies = s.diagnostics.hessian_applies;
          break;
        }
      }
      rec.step_norm = norm(step);
      rec.grad_dot_step = dot(g, step);
      theta = axpy(1.0, step, theta);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "iteration " << k << ": " << e.what();
      result.stop_reason = StopReason::Failed;
      result.failure = msg.str();
      break;
    }
    rec.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    result.total_hessian_applies += rec.hessian_applies;
    result.trace.push_back(rec);
  }
  return result;
}

}  // namespace sfhf
