#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sfhf/errors.hpp"
#include "sfhf/harness.hpp"

using namespace sfhf;
using namespace sfhf::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sfhf_test_harness";
  fs::create_directories(dir);
  return dir / name;
}

std::string config_error_key(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("parse_config defaults") {
  const RunConfig c = parse_config("problem = rosenbrock\nmethod = sfhf\n");
  CHECK(c.problem.name == "rosenbrock");
  CHECK(c.method == Method::Sfhf);
  CHECK(c.optimizer.alpha == default_alpha(Method::Sfhf));
  CHECK(c.optimizer.sqrt_cfg.rk_steps == 20);
  CHECK(c.optimizer.outer_cg_max_iters == 250);
  CHECK(c.optimizer.sqrt_cfg.inner_max_iters == 250);
  CHECK(c.optimizer.damping == 1e-6);
  CHECK(c.output_path == "trace.csv");
  CHECK(c.seed == 0);
  CHECK(parse_config("problem = quadratic\nmethod = gd").optimizer.alpha == default_alpha(Method::GradientDescent));
}

TEST_CASE("parse_config values") {
  const RunConfig q = parse_config(
      "# saddle as a general quadratic\n"
      "problem = \"quadratic\"   # quoted\n"
      "method = newton-dense\n"
      "eigenvalues = [2, -1]\n"
      "dim = 2\n"
      "x0 = [0.1, 0.1]\n"
      "alpha = 0.5\n"
      "sqrt.rk_steps = 30\n"
      "sqrt.grading = 1\n"
      "seed = 42\n"
      "output = \"out dir/t.csv\"\n");
  CHECK(q.problem.eigenvalues == std::vector<double>{2, -1});
  CHECK(q.problem.dim == 2u);
  CHECK(q.problem.x0 == std::vector<double>{0.1, 0.1});
  CHECK(q.method == Method::NewtonDense);
  CHECK(q.optimizer.alpha == 0.5);
  CHECK(q.optimizer.sqrt_cfg.rk_steps == 30);
  CHECK(q.optimizer.sqrt_cfg.grading == 1.0);
  CHECK(q.seed == 42);
  CHECK(q.output_path == "out dir/t.csv");

  const Problem p = build_problem(q.problem, q.seed);
  CHECK(p.objective->eval(Vector{1, 1}) == 0.5);
  CHECK(p.theta0 == Vector{0.1, 0.1});

  const RunConfig m = parse_config("problem = mlp-xor\nlayers = [2, 4, 1]\ninit_scale = 0.1\n");
  const Problem mp = build_problem(m.problem, 3);
  CHECK(mp.objective->dim() == mlp_parameter_count({2, 4, 1}));
  for (double v : mp.theta0.values()) CHECK(std::abs(v) <= 0.1);
  CHECK(build_problem(m.problem, 3).theta0 == mp.theta0);
  CHECK(build_problem(m.problem, 4).theta0 != mp.theta0);
}

TEST_CASE("parse_config errors name the key") {
  CHECK(config_error_key("problem = rosenbrock\nmethod = \"newton\"") == "method");
  CHECK(config_error_key("problem = rosenbrock\nmethd = sfhf") == "methd");
  CHECK(config_error_key("problem = rosenbrock\nalpha = fast") == "alpha");
  CHECK(config_error_key("problem = rosenbrock\nalpha = -1") == "alpha");
  CHECK(config_error_key("problem = rosenbrock\nsqrt.rk_steps = 2.5") == "sqrt.rk_steps");
  CHECK(config_error_key("problem = rosenbrock\nsqrt.norm_target = 1.2") == "sqrt.norm_target");
  CHECK(config_error_key("problem = rosenbrock\nalpha = 1\nalpha = 2") == "alpha");
  CHECK(config_error_key("problem = rosenbrock\ndim = 3") == "dim");
  CHECK(config_error_key("problem = rosenbrock\nlayers = [2, 1]") == "layers");
  CHECK(config_error_key("problem = knapsack") == "problem");
  CHECK(config_error_key("method = sfhf") == "problem");
  CHECK(config_error_key("problem = quadratic\neigenvalues = [1, 2]\ndim = 3") == "dim");
  CHECK(config_error_key("problem = quadratic\neigenvalues = [1, 2]\nx0 = [1]") == "x0");
  CHECK(config_error_key("problem = rosenbrock\nthis line has no equals") != "<no error>");
}

TEST_CASE("trace CSV round-trips") {
  std::vector<TraceRecord> trace(3);
  for (int i = 0; i < 3; ++i) {
    trace[i].iter = i;
    trace[i].f_value = 1.0 / 3.0 * (i + 1) - 1e-300;
    trace[i].grad_norm = std::nextafter(0.1 * i, 1.0);
    trace[i].step_norm = 1e-17 * i;
    trace[i].inner_cg_iters = 17 * i;
    trace[i].sqrt_operator_applies = 123456789012ull * i;
    trace[i].wall_seconds = 0.001 * i;
  }
  std::stringstream s;
  write_trace_csv(s, trace);
  CHECK(s.str().substr(0, kTraceHeader.size()) == kTraceHeader);
  const std::vector<TraceRecord> back = read_trace_csv(s);
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(back[i].iter == trace[i].iter);
    CHECK(back[i].f_value == trace[i].f_value);
    CHECK(back[i].grad_norm == trace[i].grad_norm);
    CHECK(back[i].step_norm == trace[i].step_norm);
    CHECK(back[i].inner_cg_iters == trace[i].inner_cg_iters);
    CHECK(back[i].sqrt_operator_applies == trace[i].sqrt_operator_applies);
    CHECK(back[i].wall_seconds == trace[i].wall_seconds);
  }
  std::stringstream bad("iter,f\n1,2\n");
  CHECK_THROWS_AS(read_trace_csv(bad), Error);
}

TEST_CASE("execute") {
  SUBCASE("mlp-xor sfhf trace is monotone") {
    RunConfig c = parse_config(
        "problem = mlp-xor\nmethod = sfhf\nseed = 7\ndamping = 1e-2\nalpha = 0.5\n"
        "max_outer_iters = 30\ngrad_tol = 1e-6\n");
    c.output_path = scratch("xor.csv").string();
    std::ostringstream log, err;
    CHECK(execute(c, log, err) == exit_code::kSuccess);
    CHECK(log.str().find("problem=mlp-xor method=sfhf") == 0);
    std::ifstream in(c.output_path);
    const std::vector<TraceRecord> t = read_trace_csv(in);
    REQUIRE(!t.empty());
    CHECK(lines_of(c.output_path).size() == t.size() + 1);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i].f_value <= t[i - 1].f_value);
  }

  SUBCASE("gd on a convex quadratic converges") {
    RunConfig c = parse_config("problem = quadratic\nmethod = gd\nalpha = 0.1\nmax_outer_iters = 2000\n"
                               "eigenvalues = [1, 2, 4]\n");
    c.output_path = scratch("gd.csv").string();
    std::ostringstream log, err;
    CHECK(execute(c, log, err) == exit_code::kSuccess);
    CHECK(log.str().find("stop_reason=converged") != std::string::npos);
  }

  SUBCASE("failed runs exit 1") {
    RunConfig c = parse_config("problem = quadratic\nmethod = newton-dense\neigenvalues = [1, 0]\n");
    c.output_path = scratch("fail.csv").string();
    std::ostringstream log, err;
    CHECK(execute(c, log, err) == exit_code::kRunFailed);
    CHECK(log.str().find("stop_reason=failed") != std::string::npos);
  }

  SUBCASE("unwritable output exits 1 with a message") {
    RunConfig c = parse_config("problem = saddle\nmethod = gd\n");
    c.output_path = (scratch("missing") / "dir" / "t.csv").string();
    std::ostringstream log, err;
    CHECK(execute(c, log, err) == exit_code::kRunFailed);
    CHECK(!err.str().empty());
  }

  SUBCASE("invalid config leaves no CSV") {
    RunConfig c = parse_config("problem = saddle\nmethod = sfhf\n");
    c.optimizer.alpha = -1.0;
    c.output_path = scratch("invalid.csv").string();
    fs::remove(c.output_path);
    std::ostringstream log, err;
    CHECK(execute(c, log, err) == exit_code::kConfigError);
    CHECK(!fs::exists(c.output_path));
  }

  SUBCASE("same config, same bytes apart from wall time") {
    RunConfig c = parse_config("problem = rosenbrock\nmethod = sfhf\ndamping = 1\nmax_outer_iters = 15\n");
    std::vector<std::vector<std::string>> runs;
    for (const char* name : {"det_a.csv", "det_b.csv"}) {
      c.output_path = scratch(name).string();
      std::ostringstream log, err;
      REQUIRE(execute(c, log, err) == exit_code::kSuccess);
      std::vector<std::string> rows = lines_of(c.output_path);
      for (std::string& r : rows) r = r.substr(0, r.rfind(','));
      runs.push_back(rows);
    }
    CHECK(runs[0] == runs[1]);
  }
}

TEST_CASE("compare") {
  RunConfig newton = parse_config("problem = saddle\nmethod = newton-dense\n");
  RunConfig sf = parse_config("problem = saddle\nmethod = sfhf\nalpha = 0.5\nmax_outer_iters = 50\n");
  const std::vector<ComparisonRow> rows = compare({newton, sf});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].method == "newton-dense");
  CHECK(std::abs(rows[0].final_f) <= 1e-20);
  CHECK(rows[1].method == "sfhf");
  CHECK(rows[1].final_f < -1.0);

  std::ostringstream csv;
  write_comparison_csv(csv, rows);
  const std::string text = csv.str();
  CHECK(text.substr(0, kComparisonHeader.size()) == kComparisonHeader);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);

  CHECK(compare({sf}).size() == 1);

  const std::string convex = "problem = quadratic\neigenvalues = [1, 3, 5]\nrotation = random\nseed = 4\n";
  const auto agree = compare({parse_config(convex + "method = newton-dense\n"),
                              parse_config(convex + "method = sfn-dense\n"),
                              parse_config(convex + "method = sfhf\n")});
  for (const ComparisonRow& r : agree)
    for (std::size_t i = 0; i < r.theta.dim(); ++i) CHECK(std::abs(r.theta[i] - agree[0].theta[i]) <= 1e-3);

  RunConfig other = sf;
  other.seed = 9;
  CHECK_THROWS_AS(compare({newton, other}), Error);
  other = sf;
  other.problem.name = "rosenbrock";
  CHECK_THROWS_AS(compare({newton, other}), Error);
}
