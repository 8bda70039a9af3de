#pragma once

#include <cstdint>

#include "plgd/problems.hpp"
#include "plgd/rng.hpp"
#include "plgd/types.hpp"

namespace plgd {

enum class NoiseMode { SphereWorstCase, Zero };

struct NoiseSpec {
  double delta = 0.0;    // gradient-noise radius
  double delta_f = 0.0;  // function-value noise bound
  std::uint64_t seed = 0;
  NoiseMode mode = NoiseMode::SphereWorstCase;
};

/// Inexact first-order oracle: exact values perturbed by seeded noise, with
/// exact call counters. Single-owner mutable state; use one instance per run.
class InexactOracle {
 public:
  InexactOracle(const ProblemInstance& problem, const NoiseSpec& noise)
      : problem_(&problem), noise_(noise), rng_(noise.seed) {
    if (noise.delta < 0.0 || noise.delta_f < 0.0) {
      throw std::invalid_argument("NoiseSpec: delta and delta_f must be >= 0");
    }
  }

  /// grad f(x) + delta * u with u a fresh unit-sphere direction; the
  /// perturbation magnitude is exactly delta, the worst case the noise model
  /// permits. Exact gradient when delta = 0 or mode is Zero.
  Vector grad_tilde(const Vector& x) {
    check_dim(x);
    ++n_grad_calls_;
    Vector g = problem_->eval_grad(x);
    if (noise_.mode == NoiseMode::SphereWorstCase && noise_.delta > 0.0) {
      g += noise_.delta * sample_unit_sphere(problem_->dim, rng_);
    }
    return g;
  }

  /// f(x) + delta_f * s with s uniform in [-1, 1]; exact when delta_f = 0 or
  /// mode is Zero.
  double f_tilde(const Vector& x) {
    check_dim(x);
    ++n_func_calls_;
    double v = problem_->eval_f(x);
    if (noise_.mode == NoiseMode::SphereWorstCase && noise_.delta_f > 0.0) {
      v += noise_.delta_f * rng_.uniform(-1.0, 1.0);
    }
    return v;
  }

  /// Exact function value, counted as a function-oracle call. The
  /// noise-adaptive solver consumes exact values by definition, so this path
  /// keeps its call accounting comparable with f_tilde users.
  double f_exact(const Vector& x) {
    check_dim(x);
    ++n_func_calls_;
    return problem_->eval_f(x);
  }

  const ProblemInstance& problem() const { return *problem_; }
  const NoiseSpec& noise() const { return noise_; }
  long n_grad_calls() const { return n_grad_calls_; }
  long n_func_calls() const { return n_func_calls_; }

 private:
  void check_dim(const Vector& x) const {
    if (x.size() != problem_->dim) {
      throw std::invalid_argument("InexactOracle: dimension mismatch");
    }
  }

  const ProblemInstance* problem_;
  NoiseSpec noise_;
  Rng rng_;
  long n_grad_calls_ = 0;
  long n_func_calls_ = 0;
};

}  // namespace plgd
