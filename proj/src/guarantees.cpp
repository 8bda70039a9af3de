#include "plgd/guarantees.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace plgd {

namespace {

double slack(double a, double b) {
  return 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// ln(mu * f0_gap / denom). The direct quotient keeps the <= 1 boundary exact;
// log space covers quotients that overflow or underflow a double.
double log_argument(double mu, double f0_gap, double denom) {
  if (!(mu > 0.0) || !(f0_gap > 0.0) || !(denom > 0.0))
    return -std::numeric_limits<double>::infinity();
  const double q = mu * f0_gap / denom;
  if (std::isfinite(q) && q > 0.0) return std::log(q);
  return std::log(mu) + std::log(f0_gap) - std::log(denom);
}

long ceil_clamped(double rate, double log_val) {
  if (!(log_val > 0.0)) return 0;
  const double v = std::ceil(rate * log_val);
  if (v >= 9.0e18) return std::numeric_limits<long>::max();
  return static_cast<long>(v);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

bool GuaranteeReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const BoundCheck& c) { return c.pass || !c.hard; });
}

long n_star_adaptive_l(const GuaranteeInputs& in) {
  if (!(in.Delta > 0.0))
    throw std::domain_error(
        "n_star_adaptive_l: Delta = 0 makes the stopping criterion undefined");
  return ceil_clamped(8.0 * in.L / in.mu,
                      log_argument(in.mu, in.f0_gap, in.Delta * in.Delta));
}

double distance_bound_adaptive_l(const GuaranteeInputs& in, double gamma) {
  const double log_val =
      log_argument(in.mu, in.f0_gap, in.Delta * in.Delta);
  double first = 0.0;
  if (log_val > 0.0) {
    first = (8.0 * in.Delta / in.mu) *
            std::sqrt(gamma * gamma / 2.0 + 4.0 * gamma * in.L / in.mu) *
            log_val;
  }
  return first + 16.0 * std::sqrt(gamma * in.L * in.f0_gap) / in.mu;
}

std::pair<double, double> envelopes(const GuaranteeInputs& in) {
  const double L_max = in.L * std::max(in.Delta / in.Delta_min, 1.0);
  const double Delta_max = 2.0 * in.Delta * std::max(in.L / in.L_min, 1.0);
  return {L_max, Delta_max};
}

long n_star_adaptive_l_delta(const GuaranteeInputs& in) {
  const auto [L_max, Delta_max] = envelopes(in);
  if (!(Delta_max > 0.0))
    throw std::domain_error(
        "n_star_adaptive_l_delta: Delta = 0 makes the stopping criterion "
        "undefined");
  return ceil_clamped(
      8.0 * L_max / in.mu,
      log_argument(in.mu, in.f0_gap, 4.0 * Delta_max * Delta_max));
}

double distance_bound_adaptive_l_delta(const GuaranteeInputs& in) {
  const auto [L_max, Delta_max] = envelopes(in);
  const double gamma = 4.0 * L_max / in.mu;
  const double log_val =
      log_argument(in.mu, in.f0_gap, 4.0 * Delta_max * Delta_max);
  double first = 0.0;
  if (log_val > 0.0) {
    first = (8.0 * Delta_max / in.mu) *
            std::sqrt(gamma * gamma / 2.0 + 2.0 * gamma * L_max / in.mu) *
            log_val;
  }
  return first + 16.0 * std::sqrt(gamma * L_max * in.f0_gap) / in.mu;
}

double func_eval_bound_adaptive_l_delta(const GuaranteeInputs& in,
                                        long n_star) {
  const double ratio =
      std::max(in.L / in.L_min, in.Delta / in.Delta_min);
  return static_cast<double>(n_star) *
         std::log2(4.0 * in.L / in.L_min * ratio);
}

double accuracy_bound(double mu, double delta_max_observed) {
  if (!(mu > 0.0)) throw std::invalid_argument("accuracy_bound: mu must be > 0");
  return 5.0 * delta_max_observed * delta_max_observed / mu;
}

GuaranteeReport verify_run(const RunResult& result,
                           const ProblemInstance& problem,
                           const GuaranteeInputs& in) {
  if (result.trace.empty())
    throw std::invalid_argument("verify_run: empty trace");
  if (result.method != Method::AdaptiveLDelta) {
    for (const auto& rec : result.trace) {
      if (rec.Delta_k != 0.0)
        throw std::invalid_argument(
            "verify_run: trace carries Delta_k values but the method is not "
            "the noise-adaptive one");
    }
  }

  GuaranteeReport rep;
  const auto [L_max, Delta_max] = envelopes(in);
  rep.L_max = L_max;
  rep.Delta_max = Delta_max;
  rep.gamma = in.L / in.L_min;

  double max_L = 0.0, max_D = 0.0;
  for (const auto& rec : result.trace) {
    max_L = std::max(max_L, rec.L_k);
    max_D = std::max(max_D, rec.Delta_k);
  }
  const double f_gap = result.trace.back().f_exact - problem.f_star;
  // Traces reloaded from CSV carry no iterate vectors; distance checks are
  // only meaningful when the output point is present.
  const bool have_x = result.x_hat.size() == problem.dim;
  const double dist = have_x ? (result.x_hat - problem.x0).norm() : 0.0;
  const double observed_iters = static_cast<double>(result.n_iterations);

  auto add = [&](std::string name, double bound, double observed, bool pass,
                 bool hard = true) {
    rep.checks.push_back({std::move(name), bound, observed, pass, hard});
  };

  add("hypothesis_L_min_ge_mu_over_4", in.mu / 4.0, in.L_min,
      in.L_min >= in.mu / 4.0, /*hard=*/false);
  add("hypothesis_Delta_sq_ge_16_L_delta_f", 16.0 * in.L * in.delta_f,
      in.Delta * in.Delta,
      in.Delta * in.Delta >= 16.0 * in.L * in.delta_f, /*hard=*/false);

  const bool have_delta = in.Delta > 0.0;

  if (result.method == Method::AdaptiveL ||
      result.method == Method::ConstantStep) {
    if (have_delta) {
      // A clamped bound of 0 means the claimed accuracy already holds at the
      // start; it does not limit how long the stricter stopping rule runs.
      rep.n_star_adaptive_l = n_star_adaptive_l(in);
      add("iterations_le_n_star", static_cast<double>(rep.n_star_adaptive_l),
          observed_iters,
          rep.n_star_adaptive_l == 0 ||
              observed_iters <= rep.n_star_adaptive_l);
    }
    rep.distance_bound_adaptive_l = distance_bound_adaptive_l(in, rep.gamma);
    if (have_x)
      add("distance_le_bound", rep.distance_bound_adaptive_l, dist,
          dist <= rep.distance_bound_adaptive_l);
    rep.accuracy = accuracy_bound(in.mu, result.delta_max_observed);
    add("f_gap_le_accuracy_bound", rep.accuracy, f_gap,
        f_gap <= rep.accuracy + 1e-18 * std::max(1.0, in.f0_gap));
  }

  if (result.method == Method::AdaptiveLDelta) {
    if (have_delta) {
      rep.n_star_adaptive_l_delta = n_star_adaptive_l_delta(in);
      add("iterations_le_n_star",
          static_cast<double>(rep.n_star_adaptive_l_delta), observed_iters,
          rep.n_star_adaptive_l_delta == 0 ||
              observed_iters <= rep.n_star_adaptive_l_delta);
      rep.func_eval_bound = func_eval_bound_adaptive_l_delta(
          in, rep.n_star_adaptive_l_delta);
      add("func_calls_le_bound", rep.func_eval_bound,
          static_cast<double>(result.trace.back().n_func_calls_cum),
          rep.n_star_adaptive_l_delta == 0 ||
              static_cast<double>(result.trace.back().n_func_calls_cum) <=
                  rep.func_eval_bound);

      // Observed-maxima variant: the envelope estimates replaced by the
      // maxima the run actually reached.
      const double n_star_obs = static_cast<double>(ceil_clamped(
          8.0 * max_L / in.mu,
          log_argument(in.mu, in.f0_gap, 4.0 * max_D * max_D)));
      add("iterations_le_n_star_observed_maxima", n_star_obs, observed_iters,
          observed_iters <= n_star_obs || n_star_obs == 0.0);

      rep.distance_bound_adaptive_l_delta = distance_bound_adaptive_l_delta(in);
      if (have_x) {
        add("distance_le_bound", rep.distance_bound_adaptive_l_delta, dist,
            dist <= rep.distance_bound_adaptive_l_delta);
        const double gamma_obs = 4.0 * max_L / in.mu;
        const double log_obs =
            log_argument(in.mu, in.f0_gap, 4.0 * max_D * max_D);
        const double dist_obs =
            (log_obs > 0.0 ? (8.0 * max_D / in.mu) *
                                 std::sqrt(gamma_obs * gamma_obs / 2.0 +
                                           2.0 * gamma_obs * max_L / in.mu) *
                                 log_obs
                           : 0.0) +
            16.0 * std::sqrt(gamma_obs * max_L * in.f0_gap) / in.mu;
        add("distance_le_bound_observed_maxima", dist_obs, dist,
            dist <= dist_obs);
      }

      // Reported with the caller's L convention; the problem's true
      // smoothness constant can sit a factor above the nominal one, so these
      // do not fail a run.
      add("max_L_k_le_2_L_max_envelope", 2.0 * L_max, max_L,
          max_L <= 2.0 * L_max, /*hard=*/false);
      add("max_Delta_k_le_Delta_max_envelope", Delta_max, max_D,
          max_D <= Delta_max, /*hard=*/false);
    }
    rep.accuracy = accuracy_bound(in.mu, result.delta_max_observed);
    add("f_gap_le_accuracy_bound", rep.accuracy, f_gap,
        f_gap <= rep.accuracy + 1e-18 * std::max(1.0, in.f0_gap));
  }

  // Row-by-row acceptance inequalities, 1e-12 relative slack.
  long violations = 0;
  long first_bad = -1;
  for (std::size_t i = 0; i + 1 < result.trace.size(); ++i) {
    const auto& cur = result.trace[i];
    const auto& nxt = result.trace[i + 1];
    const double g2 = cur.grad_tilde_norm * cur.grad_tilde_norm;
    bool ok = true;
    if (result.method == Method::AdaptiveLDelta) {
      const double lhs = nxt.f_exact - cur.f_exact;
      const double rhs = cur.Delta_k * cur.Delta_k / (2.0 * cur.L_k) -
                         g2 / (4.0 * cur.L_k);
      ok = lhs <= rhs + slack(lhs, rhs);
    } else if (result.method == Method::AdaptiveL) {
      const double lhs = nxt.f_tilde;
      const double rhs = cur.f_tilde - g2 / (4.0 * cur.L_k) +
                         in.Delta * in.Delta / (2.0 * cur.L_k) +
                         2.0 * in.delta_f;
      ok = lhs <= rhs + slack(lhs, rhs);
    }
    if (!ok) {
      ++violations;
      if (first_bad < 0) first_bad = static_cast<long>(i);
    }
  }
  if (result.method != Method::ConstantStep) {
    add("per_iteration_descent_violations", 0.0,
        static_cast<double>(violations), violations == 0);
    if (violations > 0)
      add("first_violating_row", -1.0, static_cast<double>(first_bad), false);
  }

  return rep;
}

std::string serialize_report(const GuaranteeReport& rep) {
  std::ostringstream out;
  out << "n_star_adaptive_l = " << rep.n_star_adaptive_l << '\n';
  out << "n_star_adaptive_l_delta = " << rep.n_star_adaptive_l_delta << '\n';
  out << "distance_bound_adaptive_l = " << fmt17(rep.distance_bound_adaptive_l)
      << '\n';
  out << "distance_bound_adaptive_l_delta = "
      << fmt17(rep.distance_bound_adaptive_l_delta) << '\n';
  out << "L_max = " << fmt17(rep.L_max) << '\n';
  out << "Delta_max = " << fmt17(rep.Delta_max) << '\n';
  out << "gamma = " << fmt17(rep.gamma) << '\n';
  out << "accuracy_bound = " << fmt17(rep.accuracy) << '\n';
  out << "func_eval_bound = " << fmt17(rep.func_eval_bound) << '\n';
  for (const auto& c : rep.checks) {
    out << "check." << c.name << " = "
        << (c.pass ? "pass" : (c.hard ? "FAIL" : "warn")) << " bound "
        << fmt17(c.bound) << " observed " << fmt17(c.observed) << '\n';
  }
  return out.str();
}

}  // namespace plgd
