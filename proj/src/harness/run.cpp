#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "sfhf/errors.hpp"
#include "sfhf/harness.hpp"

namespace sfhf::harness {
namespace {

// 17 significant digits round-trips every double.
std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) fields.push_back(cur);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double to_double(const std::string& s, int lineno) {
  // strtod rather than stod: subnormals set ERANGE but are valid values.
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw Error("trace CSV line " + std::to_string(lineno) + ": bad number '" + s + "'");
  return v;
}

long long to_integer(const std::string& s, int lineno) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty())
    throw Error("trace CSV line " + std::to_string(lineno) + ": bad integer '" + s + "'");
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << kTraceHeader << '\n';
  for (const TraceRecord& r : trace) {
    out << r.iter << ',' << fmt(r.f_value) << ',' << fmt(r.grad_norm) << ',' << fmt(r.step_norm)
        << ',' << r.inner_cg_iters << ',' << r.sqrt_operator_applies << ',' << fmt(r.wall_seconds)
        << '\n';
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw Error("trace CSV: missing or wrong header");
  std::vector<TraceRecord> trace;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 7)
      throw Error("trace CSV line " + std::to_string(lineno) + ": expected 7 fields");
    TraceRecord r;
    r.iter = static_cast<int>(to_integer(f[0], lineno));
    r.f_value = to_double(f[1], lineno);
    r.grad_norm = to_double(f[2], lineno);
    r.step_norm = to_double(f[3], lineno);
    r.inner_cg_iters = static_cast<int>(to_integer(f[4], lineno));
    r.sqrt_operator_applies = static_cast<std::uint64_t>(to_integer(f[5], lineno));
    r.wall_seconds = to_double(f[6], lineno);
    trace.push_back(r);
  }
  return trace;
}

std::string summary_line(const RunConfig& cfg, const RunResult& result) {
  std::ostringstream s;
  s << "problem=" << cfg.problem.name << " method=" << method_name(cfg.method)
    << " final_f=" << fmt(result.final_f) << " final_grad_norm=" << fmt(result.final_grad_norm)
    << " iterations=" << result.trace.size() << " stop_reason=" << stop_reason_name(result.stop_reason)
    << " operator_applies=" << result.total_hessian_applies;
  return s.str();
}

int execute(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  Problem problem;
  try {
    cfg.optimizer.validate();
    problem = build_problem(cfg.problem, cfg.seed);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kConfigError;
  }

  std::ofstream csv(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!csv) {
    err << "error: cannot write trace to '" << cfg.output_path << "'\n";
    return exit_code::kRunFailed;
  }

  const RunResult result = run(problem.objective, problem.theta0, cfg.method, cfg.optimizer);
  write_trace_csv(csv, result.trace);
  csv.close();
  if (!csv) {
    err << "error: failed while writing '" << cfg.output_path << "'\n";
    return exit_code::kRunFailed;
  }

  log << summary_line(cfg, result) << '\n';
  if (result.stop_reason == StopReason::Failed) {
    err << "run failed: " << result.failure << '\n';
    return exit_code::kRunFailed;
  }
  return exit_code::kSuccess;
}

std::vector<ComparisonRow> compare(const std::vector<RunConfig>& cfgs) {
  if (cfgs.empty()) throw Error("compare: no configs given");
  for (const RunConfig& c : cfgs) {
    if (!(c.problem == cfgs.front().problem))
      throw Error("compare: config for method '" + std::string(method_name(c.method)) +
                  "' uses a different problem than the first config");
    if (c.seed != cfgs.front().seed)
      throw Error("compare: config for method '" + std::string(method_name(c.method)) +
                  "' uses a different seed than the first config");
  }
  std::vector<ComparisonRow> rows;
  for (const RunConfig& c : cfgs) {
    const Problem p = build_problem(c.problem, c.seed);
    RunResult r = run(p.objective, p.theta0, c.method, c.optimizer);
    rows.push_back(ComparisonRow{std::string(method_name(c.method)), r.final_f, r.final_grad_norm,
                                 static_cast<int>(r.trace.size()), r.total_hessian_applies,
                                 r.stop_reason, std::move(r.theta)});
  }
  return rows;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << kComparisonHeader << '\n';
  for (const ComparisonRow& r : rows)
    out << r.method << ',' << fmt(r.final_f) << ',' << fmt(r.final_grad_norm) << ','
        << r.iterations << ',' << r.operator_applies << '\n';
}

}  // namespace sfhf::harness
