#include <doctest.h>

#include <cmath>

#include "plgd/noise_oracle.hpp"
#include "plgd/problems.hpp"

using namespace plgd;

namespace {

ProblemInstance small_quadratic() { return make_quadratic(8, 0.1, 1.0, 0, 3); }

}  // namespace

TEST_SUITE("noise_oracle") {

TEST_CASE("gradient noise magnitude is exactly delta") {
  const ProblemInstance p = small_quadratic();
  NoiseSpec spec;
  spec.delta = 0.3;
  spec.seed = 11;
  InexactOracle oracle(p, spec);
  Rng point_rng(5);
  for (int i = 0; i < 100; ++i) {
    const Vector x = 3.0 * sample_unit_sphere(p.dim, point_rng);
    const Vector g = oracle.grad_tilde(x);
    const double err = (g - p.eval_grad(x)).norm();
    CHECK(err == doctest::Approx(0.3).epsilon(1e-12));
  }
}

TEST_CASE("noisy gradient of a flat point has norm delta") {
  const ProblemInstance p = small_quadratic();
  NoiseSpec spec;
  spec.delta = 0.1;
  spec.seed = 4;
  InexactOracle oracle(p, spec);
  const Vector g = oracle.grad_tilde(Vector::Zero(p.dim));
  CHECK(g.norm() == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("zero mode returns exact values regardless of delta") {
  const ProblemInstance p = small_quadratic();
  NoiseSpec spec;
  spec.delta = 0.5;
  spec.delta_f = 0.5;
  spec.mode = NoiseMode::Zero;
  InexactOracle oracle(p, spec);
  const Vector x = Vector::Constant(p.dim, 2.0);
  CHECK(oracle.grad_tilde(x) == p.eval_grad(x));
  CHECK(oracle.f_tilde(x) == p.eval_f(x));
}

TEST_CASE("function band is respected and attained") {
  const ProblemInstance p = small_quadratic();
  NoiseSpec spec;
  spec.delta_f = 0.5;
  spec.seed = 21;
  InexactOracle oracle(p, spec);
  const Vector x = Vector::Constant(p.dim, 1.0);
  const double fx = p.eval_f(x);
  double max_err = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double err = std::abs(oracle.f_tilde(x) - fx);
    CHECK(err <= 0.5);
    max_err = std::max(max_err, err);
  }
  CHECK(max_err > 0.49);
}

TEST_CASE("delta_f zero is exact") {
  const ProblemInstance p = small_quadratic();
  InexactOracle oracle(p, NoiseSpec{});
  const Vector x = Vector::Constant(p.dim, -1.5);
  CHECK(oracle.f_tilde(x) == p.eval_f(x));
}

TEST_CASE("counters track every call") {
  const ProblemInstance p = small_quadratic();
  NoiseSpec spec;
  spec.delta = 0.1;
  spec.delta_f = 0.01;
  InexactOracle oracle(p, spec);
  const Vector x = Vector::Ones(p.dim);
  for (int i = 0; i < 7; ++i) oracle.grad_tilde(x);
  for (int i = 0; i < 3; ++i) oracle.f_tilde(x);
  oracle.f_exact(x);
  CHECK(oracle.n_grad_calls() == 7);
  CHECK(oracle.n_func_calls() == 4);
}

TEST_CASE("identical specs give bit-identical call sequences") {
  const ProblemInstance p = small_quadratic();
  NoiseSpec spec;
  spec.delta = 0.2;
  spec.delta_f = 0.05;
  spec.seed = 123;
  InexactOracle a(p, spec), b(p, spec);
  Rng point_rng(9);
  for (int i = 0; i < 50; ++i) {
    const Vector x = sample_unit_sphere(p.dim, point_rng);
    const Vector ga = a.grad_tilde(x), gb = b.grad_tilde(x);
    REQUIRE(ga == gb);
    REQUIRE(a.f_tilde(x) == b.f_tilde(x));
  }
}

TEST_CASE("dimension mismatch is rejected") {
  const ProblemInstance p = small_quadratic();
  InexactOracle oracle(p, NoiseSpec{});
  CHECK_THROWS_AS(oracle.grad_tilde(Vector::Zero(p.dim + 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(oracle.f_tilde(Vector::Zero(p.dim - 1)),
                  std::invalid_argument);
}

}  // TEST_SUITE
