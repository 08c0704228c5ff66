#pragma once
//
// Benchmark harness: run configuration files, CSV traces and method
// comparisons.
//
// Config files are flat `key = value` documents. Values are numbers, bare or
// double-quoted strings, or bracketed number lists; `#` starts a comment.
// Nested settings use dotted keys (`sqrt.rk_steps = 20`). Unknown keys,
// duplicate keys, type mismatches and out-of-range values are errors naming
// the key. See README.md for the full key table and defaults.
//
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfhf/objectives.hpp"
#include "sfhf/optimizers.hpp"

namespace sfhf::harness {

struct ProblemSpec {
  /// "quadratic", "saddle", "rosenbrock" or "mlp-xor".
  std::string name;
  std::optional<std::size_t> dim;
  std::vector<double> eigenvalues;
  bool random_rotation = false;
  std::vector<double> linear_term;
  std::vector<double> x0;
  std::vector<std::size_t> layers;
  double init_scale = 0.5;

  bool operator==(const ProblemSpec&) const = default;
};

struct RunConfig {
  ProblemSpec problem;
  Method method = Method::Sfhf;
  SfhfConfig optimizer;
  std::string output_path = "trace.csv";
  std::uint64_t seed = 0;
};

/// Parses and validates a config document, applying defaults.
/// Throws ConfigError naming the offending key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

struct Problem {
  ObjectivePtr objective;
  Vector theta0;
};

/// Objective and starting point for a config (problem-specific defaults
/// filled in; random parts drawn from `seed`).
Problem build_problem(const ProblemSpec& spec, std::uint64_t seed);

inline constexpr std::string_view kTraceHeader =
    "iter,f,grad_norm,step_norm,inner_cg_iters,sqrt_op_applies,wall_seconds";

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
/// Inverse of write_trace_csv for the seven serialized fields.
std::vector<TraceRecord> read_trace_csv(std::istream& in);

std::string summary_line(const RunConfig& cfg, const RunResult& result);

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kRunFailed = 1;
inline constexpr int kConfigError = 2;
}  // namespace exit_code

/// Runs one config, writes its trace CSV to cfg.output_path and the summary
/// line to `log`. Returns 0 on converged/budget, 1 on a failed run or an
/// unwritable output path.
int execute(const RunConfig& cfg, std::ostream& log, std::ostream& err);

struct ComparisonRow {
  std::string method;
  double final_f = 0.0;
  double final_grad_norm = 0.0;
  int iterations = 0;
  std::uint64_t operator_applies = 0;
  StopReason stop_reason = StopReason::Budget;
  Vector theta;
};

/// Runs every config in order. All configs must share problem and seed.
std::vector<ComparisonRow> compare(const std::vector<RunConfig>& cfgs);

inline constexpr std::string_view kComparisonHeader =
    "method,final_f,final_grad_norm,iterations,operator_applies";
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace sfhf::harness
