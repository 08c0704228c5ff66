#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <variant>

#include "sfhf/errors.hpp"
#include "sfhf/harness.hpp"
#include "sfhf/rng.hpp"

namespace sfhf::harness {
namespace {

using NumberList = std::vector<double>;
using Value = std::variant<double, std::string, NumberList>;

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

Value parse_value(const std::string& key, std::string_view raw) {
  raw = trim(raw);
  if (raw.empty()) throw ConfigError(key, "missing value");
  if (raw.front() == '[') {
    if (raw.back() != ']') throw ConfigError(key, "unterminated list");
    NumberList out;
    std::string_view body = trim(raw.substr(1, raw.size() - 2));
    while (!body.empty()) {
      const std::size_t comma = body.find(',');
      const std::string_view item = body.substr(0, comma);
      const auto num = parse_number(item);
      if (!num) throw ConfigError(key, "list entries must be numbers, got '" + std::string(trim(item)) + "'");
      out.push_back(*num);
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
      if (trim(body).empty()) throw ConfigError(key, "trailing comma in list");
    }
    return out;
  }
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') throw ConfigError(key, "unterminated string");
    return std::string(raw.substr(1, raw.size() - 2));
  }
  if (const auto num = parse_number(raw)) return *num;
  for (char c : raw)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.' ||
          c == '/'))
      throw ConfigError(key, "cannot parse value '" + std::string(raw) + "'");
  return std::string(raw);
}

std::map<std::string, Value> parse_document(std::string_view text) {
  std::map<std::string, Value> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Strip a trailing comment that is not inside a quoted string.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    const std::string key(trim(body.substr(0, eq)));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
    if (entries.count(key)) throw ConfigError(key, "duplicate key");
    entries.emplace(key, parse_value(key, body.substr(eq + 1)));
  }
  return entries;
}

// Typed readers; each consumes its key from the map.
class Reader {
 public:
  explicit Reader(std::map<std::string, Value> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::optional<double> number(const std::string& key) {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (const double* d = std::get_if<double>(&*v)) return *d;
    throw ConfigError(key, "expected a number");
  }

  std::optional<long long> integer(const std::string& key) {
    const auto d = number(key);
    if (!d) return std::nullopt;
    if (std::floor(*d) != *d || std::abs(*d) > 9.0e15) throw ConfigError(key, "expected an integer");
    return static_cast<long long>(*d);
  }

  std::optional<std::string> string(const std::string& key) {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (const std::string* s = std::get_if<std::string>(&*v)) return *s;
    throw ConfigError(key, "expected a string");
  }

  std::optional<NumberList> list(const std::string& key) {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (const NumberList* l = std::get_if<NumberList>(&*v)) return *l;
    throw ConfigError(key, "expected a list of numbers");
  }

  void reject_leftovers() const {
    if (!entries_.empty()) throw ConfigError(entries_.begin()->first, "unknown key");
  }

  void reject_for_problem(const std::string& key, const std::string& problem) const {
    if (has(key)) throw ConfigError(key, "not applicable to problem '" + problem + "'");
  }

 private:
  std::optional<Value> take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    Value v = std::move(it->second);
    entries_.erase(it);
    return v;
  }

  std::map<std::string, Value> entries_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

template <class T>
void read_positive_int(Reader& r, const std::string& key, T& field) {
  if (const auto v = r.integer(key)) {
    require(*v >= 1, key, "must be >= 1");
    field = static_cast<T>(*v);
  }
}

void read_positive(Reader& r, const std::string& key, double& field) {
  if (const auto v = r.number(key)) {
    require(*v > 0.0, key, "must be positive");
    field = *v;
  }
}

ProblemSpec read_problem(Reader& r) {
  ProblemSpec p;
  p.name = r.string("problem").value_or("");
  require(!p.name.empty(), "problem", "is required");
  const bool quadratic_like = p.name == "quadratic" || p.name == "saddle";
  require(quadratic_like || p.name == "rosenbrock" || p.name == "mlp-xor", "problem",
          "unknown problem '" + p.name + "' (expected quadratic, saddle, rosenbrock or mlp-xor)");

  if (const auto d = r.integer("dim")) {
    require(*d >= 1, "dim", "must be >= 1");
    p.dim = static_cast<std::size_t>(*d);
  }
  if (const auto x0 = r.list("x0")) p.x0 = *x0;

  if (!quadratic_like)
    for (const char* key : {"eigenvalues", "rotation", "linear_term"})
      r.reject_for_problem(key, p.name);
  if (p.name != "mlp-xor")
    for (const char* key : {"layers", "init_scale"}) r.reject_for_problem(key, p.name);

  if (quadratic_like) {
    if (const auto ev = r.list("eigenvalues")) {
      require(!ev->empty(), "eigenvalues", "must not be empty");
      p.eigenvalues = *ev;
    }
    if (const auto rot = r.string("rotation")) {
      require(*rot == "identity" || *rot == "random", "rotation",
              "expected 'identity' or 'random'");
      p.random_rotation = *rot == "random";
    }
    if (const auto b = r.list("linear_term")) p.linear_term = *b;
    if (!p.eigenvalues.empty() && p.dim)
      require(*p.dim == p.eigenvalues.size(), "dim",
              "does not match the length of eigenvalues (" + std::to_string(p.eigenvalues.size()) +
                  ")");
    if (p.name == "saddle" && p.eigenvalues.empty() && p.dim)
      require(*p.dim == 2, "dim", "the default saddle is two-dimensional");
  } else if (p.name == "rosenbrock") {
    if (p.dim) require(*p.dim >= 2 && *p.dim % 2 == 0, "dim", "must be even and >= 2");
  } else {
    require(!p.dim, "dim", "is implied by layers for mlp-xor");
    if (const auto layers = r.list("layers")) {
      for (double s : *layers)
        require(s >= 1.0 && std::floor(s) == s, "layers", "entries must be positive integers");
      require(layers->size() >= 2, "layers", "needs at least an input and an output layer");
      for (double s : *layers) p.layers.push_back(static_cast<std::size_t>(s));
      require(p.layers.front() == 2 && p.layers.back() == 1, "layers",
              "XOR needs 2 inputs and 1 output");
    }
    read_positive(r, "init_scale", p.init_scale);
  }
  return p;
}

// Dimension the problem will have once defaults are applied.
std::size_t resolved_dim(const ProblemSpec& p) {
  if (p.name == "mlp-xor")
    return mlp_parameter_count(p.layers.empty() ? std::vector<std::size_t>{2, 3, 1} : p.layers);
  if (!p.eigenvalues.empty()) return p.eigenvalues.size();
  if (p.dim) return *p.dim;
  return p.name == "quadratic" ? 8 : 2;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  Reader r(parse_document(text));
  RunConfig cfg;
  cfg.problem = read_problem(r);

  if (const auto m = r.string("method")) {
    const auto method = parse_method(*m);
    require(method.has_value(), "method",
            "unknown method '" + *m + "' (expected gd, newton-dense, sfn-dense or sfhf)");
    cfg.method = *method;
  }
  cfg.optimizer.alpha = default_alpha(cfg.method);

  if (const auto s = r.integer("seed")) {
    require(*s >= 0, "seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(*s);
  }
  if (const auto out = r.string("output")) cfg.output_path = *out;

  SfhfConfig& o = cfg.optimizer;
  read_positive(r, "alpha", o.alpha);
  if (const auto d = r.number("damping")) {
    require(*d >= 0.0, "damping", "must be >= 0");
    o.damping = *d;
  }
  read_positive(r, "outer_cg_tol", o.outer_cg_tol);
  read_positive_int(r, "outer_cg_max_iters", o.outer_cg_max_iters);
  read_positive_int(r, "max_outer_iters", o.max_outer_iters);
  read_positive(r, "grad_tol", o.grad_tol);

  SqrtApplyConfig& q = o.sqrt_cfg;
  read_positive_int(r, "sqrt.rk_steps", q.rk_steps);
  read_positive(r, "sqrt.inner_tol", q.inner_tol);
  read_positive_int(r, "sqrt.inner_max_iters", q.inner_max_iters);
  if (const auto v = r.number("sqrt.norm_target")) {
    require(*v > 0.0 && *v < 1.0, "sqrt.norm_target", "must lie in (0, 1)");
    q.norm_target = *v;
  }
  if (const auto v = r.number("sqrt.norm_safety")) {
    require(*v >= 1.0, "sqrt.norm_safety", "must be >= 1");
    q.norm_safety = *v;
  }
  read_positive_int(r, "sqrt.norm_power_iters", q.norm_power_iters);
  if (const auto v = r.number("sqrt.grading")) {
    require(*v >= 1.0, "sqrt.grading", "must be >= 1");
    q.grading = *v;
  }
  if (const auto v = r.integer("sqrt.power_seed")) {
    require(*v >= 0, "sqrt.power_seed", "must be >= 0");
    q.power_seed = static_cast<std::uint64_t>(*v);
  }
  r.reject_leftovers();

  const ProblemSpec& p = cfg.problem;
  const std::size_t m = resolved_dim(p);
  if (!p.x0.empty())
    require(p.x0.size() == m, "x0",
            "has " + std::to_string(p.x0.size()) + " entries, problem dimension is " +
                std::to_string(m));
  if (!p.linear_term.empty())
    require(p.linear_term.size() == m, "linear_term",
            "has " + std::to_string(p.linear_term.size()) + " entries, problem dimension is " +
                std::to_string(m));
  if ((cfg.method == Method::NewtonDense || cfg.method == Method::SfnDense) && m > 512)
    throw ConfigError("method", "dense methods are limited to dimension 512");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

Problem build_problem(const ProblemSpec& spec, std::uint64_t seed) {
  const std::size_t m = resolved_dim(spec);
  const auto start = [&](const std::function<double(std::size_t)>& fallback) {
    Vector x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = spec.x0.empty() ? fallback(i) : spec.x0[i];
    return x;
  };

  if (spec.name == "quadratic" || spec.name == "saddle") {
    QuadraticSpec q;
    if (!spec.eigenvalues.empty()) {
      q.eigenvalues = Vector(std::span<const double>(spec.eigenvalues));
    } else if (spec.name == "saddle") {
      q.eigenvalues = Vector{2.0, -1.0};
    } else {
      q.eigenvalues = Vector(m);
      for (std::size_t i = 0; i < m; ++i) q.eigenvalues[i] = static_cast<double>(i + 1);
    }
    if (spec.random_rotation) q.rotation_seed = seed;
    if (!spec.linear_term.empty()) q.linear_term = Vector(std::span<const double>(spec.linear_term));
    const double x0 = spec.name == "saddle" ? 0.1 : 1.0;
    return {make_quadratic(q), start([x0](std::size_t) { return x0; })};
  }
  if (spec.name == "rosenbrock")
    return {make_rosenbrock(m), start([](std::size_t i) { return i % 2 == 0 ? -1.2 : 1.0; })};
  if (spec.name == "mlp-xor") {
    MlpSpec mlp{spec.layers.empty() ? std::vector<std::size_t>{2, 3, 1} : spec.layers,
                xor_dataset()};
    Rng rng(seed);
    const double a = spec.init_scale;
    return {make_mlp(mlp), start([&](std::size_t) { return rng.uniform(-a, a); })};
  }
  throw ConfigError("problem", "unknown problem '" + spec.name + "'");
}

}  // namespace sfhf::harness
