#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "plgd/noise_oracle.hpp"
#include "plgd/types.hpp"

namespace plgd {

enum class Method { ConstantStep, AdaptiveL, AdaptiveLDelta };
enum class StopReason { GradientCriterion, IterationCap, BacktrackCap };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct SolverConfig {
  double L_min = 1e-12;
  double L0 = 1.0;
  double Delta0 = 1e-12;
  double Delta_min = 1e-12;
  double delta_f = 0.0;          // function-noise bound fed to the L-adaptive
                                 // acceptance condition
  double stop_multiplier = 2.449489742783178;  // sqrt(6)
  double stop_threshold_floor = 0.0;  // absolute floor on the stopping
                                      // threshold; lets exact-oracle runs
                                      // terminate (delta_ref = 0 otherwise
                                      // makes the criterion unreachable)
  long max_iterations = 1000000;
  int max_inner_backtracks = 200;
  bool record_iterates = true;  // store x per trace row; switch off for long
                                // runs (the final point is always kept)

  void validate() const;
};

struct IterationRecord {
  long k = 0;
  Vector x;
  double f_exact = 0.0;         // exact objective at x (trace metadata)
  double f_tilde = 0.0;         // inexact value the solver actually consumed
  double grad_tilde_norm = 0.0;
  double L_k = 0.0;
  double Delta_k = 0.0;  // noise-adaptive method only; 0 otherwise
  int n_backtracks = 0;  // doubling events in this iteration
  long n_func_calls_cum = 0;
  long n_grad_calls_cum = 0;
};

struct RunResult {
  Method method = Method::ConstantStep;
  std::vector<IterationRecord> trace;
  Vector x_hat;
  long n_iterations = 0;
  StopReason stop_reason = StopReason::IterationCap;
  double wall_time_ms = 0.0;
  double delta_max_observed = 0.0;  // max recorded Delta_k for the
                                    // noise-adaptive method; the known delta
                                    // for the other two
};

/// Thrown when an iterate or objective value stops being finite; carries the
/// trace accumulated so far.
class divergence_error : public std::runtime_error {
 public:
  divergence_error(std::string what, RunResult partial)
      : std::runtime_error(std::move(what)), partial_result(std::move(partial)) {}
  RunResult partial_result;
};

/// ||grad_tilde|| <= multiplier * delta_ref.
inline bool stopping_reached(double grad_tilde_norm, double delta_ref,
                             double multiplier) {
  return grad_tilde_norm <= multiplier * delta_ref;
}

/// L-adaptive acceptance test:
///   f_next <= f_cur + <g, step> + L_k ||step||^2 + Delta^2/(2 L_k) + 2 delta_f
/// evaluated left to right in double precision.
inline bool check_condition_adaptive_l(double f_tilde_next, double f_tilde_cur,
                                       const Vector& g, const Vector& step,
                                       double L_k, double Delta,
                                       double delta_f) {
  const double rhs = f_tilde_cur + g.dot(step) + L_k * step.squaredNorm() +
                     Delta * Delta / (2.0 * L_k) + 2.0 * delta_f;
  return f_tilde_next <= rhs;
}

/// Noise-adaptive acceptance test:
///   f_next <= f_cur + <g, step> + Delta_k ||step|| + (L_k/2) ||step||^2.
inline bool check_condition_adaptive_l_delta(double f_next, double f_cur,
                                             const Vector& g,
                                             const Vector& step, double L_k,
                                             double Delta_k) {
  const double rhs = f_cur + g.dot(step) + Delta_k * step.norm() +
                     (L_k / 2.0) * step.squaredNorm();
  return f_next <= rhs;
}

/// Smallest Delta_k making the noise-adaptive condition hold (it is affine in
/// Delta_k), floored at Delta_min and at the running maximum Delta_floor.
/// A zero step makes the condition vacuous: returns the floors' maximum.
double minimal_delta_k(double f_next, double f_cur, const Vector& g,
                       const Vector& step, double L_k, double Delta_min,
                       double Delta_floor);

/// x_{k+1} = x_k - (1/(2L)) grad_tilde(x_k) with fixed L; stops when
/// ||grad_tilde(x_k)|| <= stop_multiplier * delta (delta read from the
/// oracle's noise spec: this baseline assumes the noise level is known).
RunResult run_constant_step(InexactOracle& oracle, double L,
                            const SolverConfig& config);

/// L-adaptive descent with doubling on rejection and halving on acceptance;
/// needs the true noise radius for its acceptance condition and stopping rule.
RunResult run_adaptive_L(InexactOracle& oracle, double Delta_known,
                         const SolverConfig& config);

/// Fully adaptive method: per iteration, doubles (L_k, Delta_k) until the
/// descent condition holds, then takes the minimal feasible Delta_k
/// (nondecreasing across iterations), then halves L_k as far as the condition
/// allows. Needs neither L nor the noise radius. Consumes exact function
/// values, matching its acceptance condition.
RunResult run_adaptive_L_delta(InexactOracle& oracle,
                               const SolverConfig& config);

}  // namespace plgd
