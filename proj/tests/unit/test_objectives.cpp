#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "sfhf/errors.hpp"
#include "sfhf/objectives.hpp"
#include "sfhf/rng.hpp"

using namespace sfhf;

namespace {

ObjectivePtr xor_net() { return make_mlp({{2, 3, 1}, xor_dataset()}); }

struct Case {
  const char* label;
  ObjectivePtr obj;
  double spread;  // random points drawn from [-spread, spread]
};

std::vector<Case> all_objectives() {
  Rng rng(99);
  QuadraticSpec q{rng.normal_vector(10), 3, rng.normal_vector(10)};
  return {{"quadratic", make_quadratic(q), 2.0},
          {"rosenbrock-2", make_rosenbrock(2), 1.5},
          {"rosenbrock-6", make_rosenbrock(6), 1.5},
          {"mlp-xor", xor_net(), 1.0},
          {"mlp-deep", make_mlp({{2, 4, 3, 1}, xor_dataset()}), 1.0},
          {"diag-rank1", make_diag_rank_one(rng.normal_vector(9), rng.normal_vector(9), 0.7,
                                            rng.normal_vector(9)), 2.0}};
}

}  // namespace

TEST_CASE("make_quadratic") {
  const auto convex = make_quadratic({Vector{2, 4}, std::nullopt, {}});
  CHECK(convex->grad(Vector{1, 1}) == Vector{2, 4});
  const auto saddle = make_quadratic({Vector{2, -1}, std::nullopt, {}});
  CHECK(saddle->eval(Vector{1, 1}) == 0.5);
  const auto degenerate = make_quadratic({Vector{0, 1}, std::nullopt, {}});
  CHECK(degenerate->hvp(Vector{3, 3}, Vector{1, 1}) == Vector{0, 1});
  const auto shifted = make_quadratic({Vector{2, 4}, std::nullopt, Vector{1, 1}});
  CHECK(shifted->grad(Vector{0.5, 0.25}) == Vector{0, 0});
  CHECK_THROWS_AS(make_quadratic({Vector{1, 2}, std::nullopt, Vector{1, 2, 3}}), DimensionError);

  SUBCASE("rotated hvp matches the dense construction") {
    // The library draws its own U from the seed; recover H column by column
    // and compare against U diag(lambda) U' rebuilt from its eigen-pairs:
    // H must be symmetric with the requested spectrum, i.e. H^2 has trace
    // sum(lambda^2) and H v matches the explicit dense H.
    Rng rng(12);
    const Vector lambda = rng.normal_vector(16);
    const auto obj = make_quadratic({lambda, 5, {}});
    oracle::Mat h = oracle::zeros(16);
    for (std::size_t j = 0; j < 16; ++j) {
      Vector e(16);
      e[j] = 1.0;
      const Vector col = obj->hvp(Vector(16), e);
      for (std::size_t i = 0; i < 16; ++i) h[i][j] = col[i];
    }
    double trace = 0.0, trace_sq = 0.0, sum = 0.0, sum_sq = 0.0;
    const oracle::Mat h2 = oracle::matmul(h, h);
    for (std::size_t i = 0; i < 16; ++i) {
      trace += h[i][i];
      trace_sq += h2[i][i];
      sum += lambda[i];
      sum_sq += lambda[i] * lambda[i];
    }
    CHECK(trace == doctest::Approx(sum).epsilon(1e-12));
    CHECK(trace_sq == doctest::Approx(sum_sq).epsilon(1e-12));
    CHECK(oracle::frob(oracle::sub(h, oracle::transpose(h))) <= 1e-12 * oracle::frob(h));
    for (int trial = 0; trial < 5; ++trial) {
      const Vector v = rng.normal_vector(16);
      CHECK(oracle::rel_err(obj->hvp(rng.normal_vector(16), v), oracle::matvec(h, oracle::to_std(v))) <= 1e-12);
    }
  }

  SUBCASE("hvp is theta-independent") {
    Rng rng(13);
    const auto obj = make_quadratic({rng.normal_vector(8), 2, {}});
    const Vector v = rng.normal_vector(8);
    CHECK(obj->hvp(rng.normal_vector(8), v) == obj->hvp(rng.normal_vector(8), v));
  }
}

TEST_CASE("make_rosenbrock") {
  const auto r4 = make_rosenbrock(4);
  CHECK(r4->eval(Vector(4, 1.0)) == 0.0);
  CHECK(r4->grad(Vector(4, 1.0)) == Vector(4));
  const auto r2 = make_rosenbrock(2);
  CHECK(r2->eval(Vector{0, 0}) == 1.0);
  // Hand-computed Hessian at the origin: [[2, 0], [0, 200]].
  CHECK(r2->hvp(Vector{0, 0}, Vector{1, 0}) == Vector{2, 0});
  CHECK(r2->hvp(Vector{0, 0}, Vector{0, 1}) == Vector{0, 200});
  CHECK(oracle::rel_err(r2->hvp(Vector{0, 0}, Vector{0.3, -0.7}),
                        oracle::fd_hvp(*r2, Vector{0, 0}, Vector{0.3, -0.7})) <= 1e-4);
  CHECK_THROWS_AS(make_rosenbrock(3), DimensionError);
  CHECK_THROWS_AS(make_rosenbrock(0), DimensionError);
}

TEST_CASE("make_mlp") {
  CHECK(xor_net()->dim() == mlp_parameter_count({2, 3, 1}));
  CHECK(xor_net()->dim() == 13);

  SUBCASE("zero net on zero data is flat") {
    const auto net = make_mlp({{2, 3, 1}, {{{0, 0}, {0}}, {{0, 0}, {0}}}});
    const Vector zero(net->dim());
    CHECK(net->eval(zero) == 0.0);
    CHECK(net->grad(zero) == zero);
  }

  SUBCASE("known loss") {
    // Zero weights: output 0 everywhere, XOR targets (0,1,1,0) -> MSE 0.5.
    CHECK(xor_net()->eval(Vector(13)) == 0.5);
  }

  SUBCASE("construction errors") {
    CHECK_THROWS_AS(make_mlp({{3, 2, 1}, xor_dataset()}), DimensionError);
    CHECK_THROWS_AS(make_mlp({{2, 3, 2}, xor_dataset()}), DimensionError);
    CHECK_THROWS_AS(make_mlp({{2}, xor_dataset()}), DimensionError);
    CHECK_THROWS_AS(make_mlp({{2, 1}, {}}), DimensionError);
  }

  SUBCASE("R-operator hvp agrees with finite differences and is symmetric (seed 7)") {
    const auto net = xor_net();
    Rng rng(7);
    const Vector theta = rng.uniform_vector(net->dim(), -1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      const Vector v = rng.normal_vector(net->dim());
      CHECK(oracle::rel_err(net->hvp(theta, v), oracle::fd_hvp(*net, theta, v)) <= 1e-4);
      const Vector u = rng.normal_vector(net->dim());
      const double uhw = dot(u, net->hvp(theta, v)), whu = dot(v, net->hvp(theta, u));
      CHECK(std::abs(uhw - whu) <= 1e-9 * std::max(std::abs(uhw), 1e-300));
    }
  }
}

TEST_CASE("gradients match central finite differences") {
  for (const Case& c : all_objectives()) {
    CAPTURE(c.label);
    Rng rng(20);
    for (int trial = 0; trial < 20; ++trial) {
      const Vector theta = rng.uniform_vector(c.obj->dim(), -c.spread, c.spread);
      CHECK(oracle::rel_err(c.obj->grad(theta), oracle::fd_gradient(*c.obj, theta)) <= 1e-5);
    }
  }
}

TEST_CASE("Hessian-vector products are symmetric and match finite differences") {
  for (const Case& c : all_objectives()) {
    CAPTURE(c.label);
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
      const Vector theta = rng.uniform_vector(c.obj->dim(), -c.spread, c.spread);
      const Vector u = rng.normal_vector(c.obj->dim()), w = rng.normal_vector(c.obj->dim());
      const double a = dot(u, c.obj->hvp(theta, w)), b = dot(w, c.obj->hvp(theta, u));
      CHECK(std::abs(a - b) <= 1e-9 * std::max({std::abs(a), std::abs(b), 1e-12}));
      CHECK(oracle::rel_err(c.obj->hvp(theta, w), oracle::fd_hvp(*c.obj, theta, w)) <= 1e-4);
    }
  }
}

TEST_CASE("as_hessian_operator") {
  const auto d = make_quadratic({Vector{2, -1}, std::nullopt, {}});
  CHECK(as_hessian_operator(d, Vector{5, 5}).apply(Vector{1, 0}) == Vector{2, 0});
  Rng rng(30);
  const Vector v = rng.normal_vector(6);
  CHECK(as_hessian_operator(make_quadratic({Vector(6, 1.0), 4, {}}), Vector(6)).apply(v)[0] ==
        doctest::Approx(v[0]).epsilon(1e-14));

  // Rosenbrock at the origin against the hand-computed dense Hessian.
  const SymmetricOperator h = as_hessian_operator(make_rosenbrock(2), Vector{0, 0});
  CHECK(h.apply(Vector{1.5, -2}) == Vector{3, -400});

  SUBCASE("theta is frozen at call time") {
    const auto r = make_rosenbrock(2);
    Vector theta{0.5, 0.5};
    const SymmetricOperator op = as_hessian_operator(r, theta);
    const Vector before = op.apply(Vector{1, 1});
    theta[0] = -3.0;
    CHECK(op.apply(Vector{1, 1}) == before);
  }
  CHECK_THROWS_AS(as_hessian_operator(d, Vector{1, 2, 3}), DimensionError);
}
