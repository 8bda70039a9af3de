#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "plgd/problems.hpp"
#include "plgd/rng.hpp"

using namespace plgd;
using plgd::testing::finite_difference_gradient;
using plgd::testing::spectral_oracle;

namespace {

double rel_err(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(1e-30, b.norm());
}

}  // namespace

TEST_SUITE("problems") {

TEST_CASE("quadratic: start-to-solution distance matches the construction") {
  const ProblemInstance p = make_quadratic(100, 0.01, 1.0, 10, 7);
  REQUIRE(p.solution_distance);
  // sqrt(90 * 100^2)
  CHECK(p.solution_distance(p.x0) ==
        doctest::Approx(948.68329805051381).epsilon(1e-12));
  CHECK(p.eval_f(Vector::Zero(100)) == 0.0);
  CHECK(p.quadratic->diag.minCoeff() == 0.0);
  CHECK(p.quadratic->diag.maxCoeff() == 1.0);
  int zeros = 0;
  double min_nonzero = 1e300;
  for (Index i = 0; i < 100; ++i) {
    const double d = p.quadratic->diag[i];
    if (d == 0.0)
      ++zeros;
    else
      min_nonzero = std::min(min_nonzero, d);
  }
  CHECK(zeros == 10);
  CHECK(min_nonzero == 0.01);
}

TEST_CASE("quadratic: one-dimensional hand arithmetic") {
  const ProblemInstance p = make_quadratic(1, 1.0, 1.0, 0, 1);
  Vector x(1);
  x << 3.0;
  CHECK(p.eval_f(x) == doctest::Approx(9.0));
  CHECK(p.eval_grad(x)[0] == doctest::Approx(6.0));
}

TEST_CASE("quadratic: gradient norm dominates the PL ratio") {
  const ProblemInstance p = make_quadratic(100, 0.1, 1.0, 0, 11);
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    Vector x(100);
    for (Index j = 0; j < 100; ++j) x[j] = rng.uniform(-120.0, 120.0);
    const double f = p.eval_f(x);
    const double g2 = p.eval_grad(x).squaredNorm();
    // ||grad f||^2 = sum 4 d_i^2 x_i^2 >= 4 min_nonzero(d) * f
    CHECK(g2 >= 4.0 * 0.1 * f * (1.0 - 1e-12));
  }
}

TEST_CASE("quadratic: invalid arguments") {
  CHECK_THROWS_AS(make_quadratic(5, 0.1, 1.0, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_quadratic(5, 0.1, 1.0, 7, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_quadratic(5, 2.0, 1.0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_quadratic(0, 0.1, 1.0, 0, 1), std::invalid_argument);
}

TEST_CASE("quadratic: construction is deterministic") {
  const ProblemInstance a = make_quadratic(50, 0.01, 1.0, 5, 99);
  const ProblemInstance b = make_quadratic(50, 0.01, 1.0, 5, 99);
  REQUIRE(a.quadratic->diag == b.quadratic->diag);
  const ProblemInstance c = make_quadratic(50, 0.01, 1.0, 5, 100);
  CHECK(a.quadratic->diag != c.quadratic->diag);
}

TEST_CASE("logistic: value at zero is log 2") {
  const ProblemInstance p = make_logistic(20, 60, 3);
  CHECK(p.eval_f(Vector::Zero(20)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("logistic: gradient matches finite differences") {
  const ProblemInstance p = make_logistic(15, 40, 5);
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const Vector x = 2.0 * sample_unit_sphere(15, rng);
    const Vector g = p.eval_grad(x);
    const Vector fd = finite_difference_gradient(p.eval_f, x);
    CHECK(rel_err(fd, g) <= 1e-6);
  }
}

TEST_CASE("logistic: a finite minimizer exists") {
  // Independent descent with halved steps until the gradient collapses; the
  // flipped labels must make this reachable.
  const ProblemInstance p = make_logistic(20, 60, 3);
  Vector x = p.x0;
  double L = 1.0;
  double fx = p.eval_f(x);
  double gnorm = 1.0;
  for (int k = 0; k < 50000; ++k) {
    const Vector g = p.eval_grad(x);
    gnorm = g.norm();
    if (gnorm < 1e-7) break;
    for (int b = 0; b < 100; ++b) {
      const Vector xt = x - g / (2.0 * L);
      const double ft = p.eval_f(xt);
      if (ft <= fx - g.squaredNorm() / (4.0 * L)) {
        x = xt;
        fx = ft;
        L = std::max(L / 2.0, 1e-9);
        break;
      }
      L *= 2.0;
    }
  }
  CHECK(gnorm < 1e-6);
  CHECK(p.f_star_is_reference);
  CHECK(fx >= p.f_star - 1e-9);
}

TEST_CASE("logistic: paper-scale shapes" * doctest::skip(false)) {
  const ProblemInstance p = make_logistic(200, 700, 1);
  CHECK(p.dim == 200);
  CHECK(p.logistic->features.rows() == 700);
  CHECK(p.logistic->features.cols() == 200);
  CHECK(p.logistic->labels.size() == 700);
  for (Index i = 0; i < 700; ++i)
    CHECK(std::abs(p.logistic->labels[i]) == 1.0);
  CHECK(p.logistic->features.allFinite());
  CHECK(p.pl_mu_valid > 0.0);
  CHECK(p.lipschitz_L > 0.0);
  CHECK(p.pl_mu <= p.lipschitz_L);
}

TEST_CASE("trig: planted point solves the system") {
  const ProblemInstance p = make_trig_system(64, 6, 17);
  const Vector& star = p.trig->planted_solution;
  CHECK(p.eval_f(star) <= 6.0 * 1e-18);
  CHECK(p.eval_grad(star).norm() <= 1e-8);
}

TEST_CASE("trig: row blocks are mutually orthogonal") {
  const ProblemInstance p = make_trig_system(64, 6, 17);
  const Matrix AB = p.trig->A * p.trig->B.transpose();
  const Matrix BA = p.trig->B * p.trig->A.transpose();
  CHECK(AB.cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(BA.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("trig: gradient matches finite differences") {
  const ProblemInstance p = make_trig_system(256, 8, 20);
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    Vector x(256);
    for (Index j = 0; j < 256; ++j) x[j] = rng.uniform(-3.0, 3.0);
    const Vector g = p.eval_grad(x);
    const Vector fd = finite_difference_gradient(p.eval_f, x);
    CHECK(rel_err(fd, g) <= 1e-6);
  }
}

TEST_CASE("trig: invalid sizes") {
  CHECK_THROWS_AS(make_trig_system(15, 8, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_trig_system(16, 0, 1), std::invalid_argument);
}

TEST_CASE("trig: construction is deterministic") {
  const ProblemInstance a = make_trig_system(32, 4, 2);
  const ProblemInstance b = make_trig_system(32, 4, 2);
  REQUIRE(a.trig->A == b.trig->A);
  REQUIRE(a.trig->B == b.trig->B);
  REQUIRE(a.trig->targets == b.trig->targets);
}

TEST_CASE("PL inequality holds with the reported constant") {
  SUBCASE("quadratic") {
    const ProblemInstance p = make_quadratic(100, 0.01, 1.0, 10, 7);
    Rng rng(31);
    for (int i = 0; i < 1000; ++i) {
      Vector x(100);
      for (Index j = 0; j < 100; ++j) x[j] = rng.uniform(-120.0, 120.0);
      const double gap = p.eval_f(x) - p.f_star;
      const double g2 = p.eval_grad(x).squaredNorm();
      CHECK(gap <= g2 / (2.0 * p.pl_mu) * (1.0 + 1e-12));
    }
  }
  SUBCASE("trig") {
    const ProblemInstance p = make_trig_system(256, 8, 20);
    Rng rng(32);
    for (int i = 0; i < 1000; ++i) {
      Vector x(256);
      for (Index j = 0; j < 256; ++j) x[j] = rng.uniform(-3.2, 3.2);
      const double gap = p.eval_f(x) - p.f_star;
      const double g2 = p.eval_grad(x).squaredNorm();
      CHECK(gap <= g2 / (2.0 * p.pl_mu) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("smoothness inequality holds with the reported constant") {
  SUBCASE("quadratic") {
    const ProblemInstance p = make_quadratic(100, 0.01, 1.0, 10, 7);
    Rng rng(33);
    for (int i = 0; i < 1000; ++i) {
      Vector x(100), y(100);
      for (Index j = 0; j < 100; ++j) {
        x[j] = rng.uniform(-120.0, 120.0);
        y[j] = rng.uniform(-120.0, 120.0);
      }
      const double lhs = (p.eval_grad(x) - p.eval_grad(y)).norm();
      CHECK(lhs <= p.lipschitz_L * (x - y).norm() * (1.0 + 1e-12));
    }
  }
  SUBCASE("trig") {
    const ProblemInstance p = make_trig_system(64, 6, 17);
    Rng rng(34);
    for (int i = 0; i < 1000; ++i) {
      Vector x(64), y(64);
      for (Index j = 0; j < 64; ++j) {
        x[j] = rng.uniform(-3.2, 3.2);
        y[j] = rng.uniform(-3.2, 3.2);
      }
      const double lhs = (p.eval_grad(x) - p.eval_grad(y)).norm();
      CHECK(lhs <= p.lipschitz_L * (x - y).norm() * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("estimate_pl_mu: constant ratio in one dimension") {
  const ProblemInstance p = make_quadratic(1, 1.0, 1.0, 0, 1);
  const double mu = estimate_pl_mu(p, 200, 9);
  CHECK(mu == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("estimate_pl_mu: bracketed by twice the extreme eigenvalues") {
  const ProblemInstance p = make_quadratic(100, 0.1, 1.0, 0, 11);
  const double mu = estimate_pl_mu(p, 2000, 10);
  CHECK(mu >= 0.2 * (1.0 - 1e-9));
  CHECK(mu <= 2.0 * (1.0 + 1e-9));
}

TEST_CASE("estimate_pl_mu: finite and nonnegative on the trig system") {
  const ProblemInstance p = make_trig_system(32, 4, 2);
  const double mu = estimate_pl_mu(p, 500, 12);
  CHECK(mu >= 0.0);
  CHECK(std::isfinite(mu));
}

TEST_CASE("estimate_pl_mu: flat objective has no valid samples") {
  ProblemInstance p;
  p.dim = 3;
  p.family = "synthetic";
  p.eval_f = [](const Vector&) { return 1.0; };
  p.eval_grad = [](const Vector& x) { return Vector::Zero(x.size()).eval(); };
  p.f_star = 1.0;
  p.x0 = Vector::Zero(3);
  CHECK_THROWS_AS(estimate_pl_mu(p, 100, 1), std::runtime_error);
}

TEST_CASE("spectral_constants: identity and diagonal cases") {
  const auto [s1, l1] = spectral_constants(Matrix::Identity(3, 3));
  CHECK(s1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l1 == doctest::Approx(1.0).epsilon(1e-12));

  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = 3.0;
  D(1, 1) = 2.0;
  const auto [s2, l2] = spectral_constants(D);
  CHECK(s2 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(l2 == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("spectral_constants: agrees with the power-iteration oracle") {
  Rng rng(44);
  Matrix M(8, 32);
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 32; ++j) M(i, j) = rng.gaussian();
  const auto [sigma, lmin] = spectral_constants(M);
  const auto [sigma_ref, lmin_ref] = spectral_oracle(M);
  CHECK(sigma == doctest::Approx(sigma_ref).epsilon(1e-8));
  CHECK(lmin == doctest::Approx(lmin_ref).epsilon(1e-6));
}

TEST_CASE("spectral_constants: rejects bad input") {
  CHECK_THROWS_AS(spectral_constants(Matrix()), std::invalid_argument);
  Matrix M(2, 2);
  M << 1.0, 2.0, 3.0, std::nan("");
  CHECK_THROWS_AS(spectral_constants(M), std::invalid_argument);
}

TEST_CASE("serialize_problem: carries the family and data") {
  const ProblemInstance p = make_quadratic(4, 0.5, 1.0, 1, 3);
  const std::string text = serialize_problem(p);
  CHECK(text.find("family = quadratic") != std::string::npos);
  CHECK(text.find("diag =") != std::string::npos);
  CHECK(text.find("x0 =") != std::string::npos);
}

}  // TEST_SUITE
