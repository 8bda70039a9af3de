#pragma once

#include <string>
#include <vector>

#include "plgd/problems.hpp"
#include "plgd/solvers.hpp"

namespace plgd {

/// Constants entering the closed-form convergence bounds.
struct GuaranteeInputs {
  double L = 0.0;
  double mu = 0.0;
  double f0_gap = 0.0;  // f(x0) - f*
  double Delta = 0.0;
  double Delta_min = 0.0;
  double L_min = 0.0;
  double delta_f = 0.0;
};

struct BoundCheck {
  std::string name;
  double bound = 0.0;
  double observed = 0.0;
  bool pass = false;
  bool hard = true;  // hypothesis checks are reported but do not fail a run
};

struct GuaranteeReport {
  long n_star_adaptive_l = 0;
  long n_star_adaptive_l_delta = 0;
  double distance_bound_adaptive_l = 0.0;
  double distance_bound_adaptive_l_delta = 0.0;
  double L_max = 0.0;
  double Delta_max = 0.0;
  double gamma = 0.0;
  double accuracy = 0.0;
  double func_eval_bound = 0.0;
  std::vector<BoundCheck> checks;

  bool all_pass() const;
};

/// ceil((8L/mu) ln(mu f0_gap / Delta^2)), clamped at 0 when the logarithm
/// argument is <= 1 (criterion already met at the start).
long n_star_adaptive_l(const GuaranteeInputs& in);

/// (8 Delta / mu) sqrt(gamma^2/2 + 4 gamma L / mu) ln(mu f0_gap / Delta^2)
///   + 16 sqrt(gamma L f0_gap) / mu,  gamma = L / L_min.
/// First term clamped at 0 when the logarithm argument is <= 1.
double distance_bound_adaptive_l(const GuaranteeInputs& in, double gamma);

/// Worst-case envelopes of the adaptive parameters:
///   L_max    = L max{Delta/Delta_min, 1}
///   Delta_max = 2 Delta max{L/L_min, 1}.
/// (The running L_k additionally stays within a factor 2 of L_max; that
/// envelope is audited separately.)
std::pair<double, double> envelopes(const GuaranteeInputs& in);

/// ceil((8 L_max/mu) ln(mu f0_gap / (4 Delta_max^2))), clamped at 0.
long n_star_adaptive_l_delta(const GuaranteeInputs& in);

/// Distance bound for the fully adaptive method, gamma = 4 L_max / mu:
/// (8 Delta_max/mu) sqrt(gamma^2/2 + 2 gamma L_max/mu) ln(mu f0_gap/(4 Delta_max^2))
///   + 16 sqrt(gamma L_max f0_gap) / mu.
double distance_bound_adaptive_l_delta(const GuaranteeInputs& in);

/// N_star * log2((4L/L_min) max{L/L_min, Delta/Delta_min}).
double func_eval_bound_adaptive_l_delta(const GuaranteeInputs& in, long n_star);

/// 5 * delta_max_observed^2 / mu.
double accuracy_bound(double mu, double delta_max_observed);

/// Audits a completed run against every implemented bound: nominal values,
/// the variants with the observed max L_k / max Delta_k substituted, and
/// row-by-row acceptance-condition checks for the adaptive traces.
GuaranteeReport verify_run(const RunResult& result,
                           const ProblemInstance& problem,
                           const GuaranteeInputs& in);

std::string serialize_report(const GuaranteeReport& report);

}  // namespace plgd
