#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "plgd/types.hpp"

namespace plgd {

struct QuadraticSpec {
  Vector diag;  // d_i >= 0
  Index n_zero = 0;
};

struct LogisticSpec {
  Matrix features;  // m x n, rows w_i
  Vector labels;    // entries in {-1, +1}
  Index m = 0;
  Index n = 0;
};

struct TrigSystemSpec {
  Matrix A;  // m x n
  Matrix B;  // m x n, A*B^T = B*A^T = 0 by construction
  Vector targets;  // E = g(planted_solution)
  Vector planted_solution;
};

/// One benchmark objective with exact oracles and its reported constants.
/// Instances are immutable after construction and freely shareable.
struct ProblemInstance {
  Index dim = 0;
  std::function<double(const Vector&)> eval_f;
  std::function<Vector(const Vector&)> eval_grad;

  double lipschitz_L = 0.0;  // nominal smoothness constant, per-family convention
  double pl_mu = 0.0;        // nominal PL constant, per-family convention
  double pl_mu_valid = 0.0;  // sampled/closed-form constant the PL inequality
                             // provably-or-empirically holds with

  double f_star = 0.0;
  bool f_star_is_reference = false;  // true when f_star is a refinement-run value

  Vector x0;
  std::function<double(const Vector&)> solution_distance;  // null when unknown

  std::string family;  // "quadratic" | "logistic" | "trig"
  std::uint64_t seed = 0;
  std::optional<QuadraticSpec> quadratic;
  std::optional<LogisticSpec> logistic;
  std::optional<TrigSystemSpec> trig;
};

/// f(x) = sum_i d_i x_i^2 with zero_count vanishing d_i, one entry mu, one
/// entry L, the rest log-uniform in [mu, L]; x0 = (100, ..., 100)^T.
/// Reported constants follow the max/min-of-diag convention.
ProblemInstance make_quadratic(Index n, double mu, double L, Index zero_count,
                               std::uint64_t seed);

/// f(x) = (1/m) sum_i log(1 + exp(-y_i <w_i, x>)) on a synthetic dataset with
/// a verified finite minimizer (10% of labels flipped to make the loss
/// coercive). f_star is a reference value from an exact-gradient refinement
/// run, not an exact optimum.
ProblemInstance make_logistic(Index n, Index m, std::uint64_t seed);

/// f(x) = sum_i (g_i(x) - E_i)^2 with g_i(x) = sum_j A_ij sin(x_j) + B_ij cos(x_j),
/// A and B built from disjoint blocks of a random orthonormal set so that
/// A*B^T = 0, and targets planted so f_star = 0. Requires 2m <= n.
ProblemInstance make_trig_system(Index n, Index m, std::uint64_t seed);

/// Smallest sampled value of ||grad f(x)||^2 / (2 (f(x) - f*)) over a mixed
/// sample (box points, coordinate rays, perturbations around a refined
/// near-minimizer). Any sampled ratio upper-bounds the largest globally valid
/// PL constant, so smaller is safer.
double estimate_pl_mu(const ProblemInstance& problem, int n_samples,
                      std::uint64_t seed);

/// Largest singular value of M and smallest eigenvalue of M*M^T.
std::pair<double, double> spectral_constants(const Matrix& M);

/// Key-value text form of an instance (family, sizes, seed, matrix data with
/// 17 significant digits) for reproducibility audits.
std::string serialize_problem(const ProblemInstance& problem);

}  // namespace plgd
