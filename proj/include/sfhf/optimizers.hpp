#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfhf/objectives.hpp"
#include "sfhf/sqrt_ode.hpp"
#include "sfhf/vector.hpp"

namespace sfhf {

enum class Method { GradientDescent, NewtonDense, SfnDense, Sfhf };

std::string_view method_name(Method m);
/// "gd", "newton-dense", "sfn-dense" or "sfhf"; nullopt otherwise.
std::optional<Method> parse_method(std::string_view name);
/// Learning rate used when a run config leaves alpha unset.
double default_alpha(Method m);

struct SfhfConfig {
  double alpha = 1.0;
  /// Tikhonov shift added to H^2.
  double damping = 1e-6;
  SqrtApplyConfig sqrt_cfg;
  double outer_cg_tol = 1e-6;
  int outer_cg_max_iters = 250;
  int max_outer_iters = 100;
  double grad_tol = 1e-8;

  void validate() const;
};

/// One row per completed outer iteration. The first seven fields are the CSV
/// columns; the rest are kept in memory only.
struct TraceRecord {
  int iter = 0;
  double f_value = 0.0;
  double grad_norm = 0.0;
  double step_norm = 0.0;
  int inner_cg_iters = 0;
  std::uint64_t sqrt_operator_applies = 0;
  double wall_seconds = 0.0;

  /// grad f . step at the iterate the step was taken from.
  double grad_dot_step = 0.0;
  /// Hessian-vector products spent on the step.
  std::uint64_t hessian_applies = 0;
};

struct SfhfDiagnostics {
  /// Inner (ODE right-hand side) plus outer CG iterations.
  int inner_cg_iters = 0;
  int outer_cg_iters = 0;
  std::uint64_t outer_cg_applies = 0;
  /// Applies of H^2 + damping*I inside sqrt_apply.
  std::uint64_t sqrt_operator_applies = 0;
  int sqrt_rhs_evaluations = 0;
  std::uint64_t sqrt_inner_cg_applies = 0;
  /// Applies of H^2 + damping*I across the whole step.
  std::uint64_t squared_operator_applies = 0;
  std::uint64_t hessian_applies = 0;
  double outer_cg_residual = 0.0;
  bool outer_cg_converged = true;
  double worst_inner_residual = 0.0;
  double sqrt_scale = 0.0;
};

struct SfhfStep {
  Vector step;
  SfhfDiagnostics diagnostics;
};

/// Saddle-free Hessian-free step: y ~ (H^2 + eps I)^(1/2) g by the sqrt ODE,
/// then step solves (H^2 + eps I) step = -alpha y by CG.
SfhfStep sfhf_step(const ObjectivePtr& obj, const Vector& theta, const SfhfConfig& cfg);

/// -alpha grad f.
Vector gd_step(const Objective& obj, const Vector& theta, double alpha);

enum class StopReason { Converged, Budget, Failed };
std::string_view stop_reason_name(StopReason r);

struct RunResult {
  Vector theta;
  std::vector<TraceRecord> trace;
  StopReason stop_reason = StopReason::Budget;
  /// Set when stop_reason is Failed.
  std::string failure;
  double final_f = 0.0;
  double final_grad_norm = 0.0;
  std::uint64_t total_hessian_applies = 0;
};

/// Iterates theta <- theta + step until |grad f| <= grad_tol, the iteration
/// budget runs out, or a step fails. Step failures end the run with
/// StopReason::Failed and keep the partial trace; they are not rethrown.
RunResult run(const ObjectivePtr& obj, const Vector& theta0, Method method, const SfhfConfig& cfg);

}  // namespace sfhf
