#include "plgd/solvers.hpp"

#include <chrono>
#include <cmath>

namespace plgd {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool finite(const Vector& v) { return v.allFinite(); }

[[noreturn]] void throw_divergence(RunResult res, const char* where) {
  res.n_iterations = static_cast<long>(res.trace.size()) - 1;
  if (!res.trace.empty()) res.x_hat = res.trace.back().x;
  throw divergence_error(std::string("non-finite iterate in ") + where,
                         std::move(res));
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::ConstantStep: return "constant";
    case Method::AdaptiveL: return "adaptive_l";
    case Method::AdaptiveLDelta: return "adaptive_l_delta";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "constant") return Method::ConstantStep;
  if (name == "adaptive_l") return Method::AdaptiveL;
  if (name == "adaptive_l_delta") return Method::AdaptiveLDelta;
  throw std::invalid_argument("unknown method name: " + name);
}

void SolverConfig::validate() const {
  if (!(L_min > 0.0)) throw std::invalid_argument("SolverConfig: L_min must be > 0");
  if (L0 < L_min) throw std::invalid_argument("SolverConfig: L0 must be >= L_min");
  if (!(Delta_min > 0.0))
    throw std::invalid_argument("SolverConfig: Delta_min must be > 0");
  if (Delta0 < Delta_min)
    throw std::invalid_argument("SolverConfig: Delta0 must be >= Delta_min");
  if (delta_f < 0.0) throw std::invalid_argument("SolverConfig: delta_f must be >= 0");
  if (!(stop_multiplier > 0.0))
    throw std::invalid_argument("SolverConfig: stop_multiplier must be > 0");
  if (stop_threshold_floor < 0.0)
    throw std::invalid_argument("SolverConfig: stop_threshold_floor must be >= 0");
  if (max_iterations < 1)
    throw std::invalid_argument("SolverConfig: max_iterations must be >= 1");
  if (max_inner_backtracks < 1)
    throw std::invalid_argument("SolverConfig: max_inner_backtracks must be >= 1");
}

double minimal_delta_k(double f_next, double f_cur, const Vector& g,
                       const Vector& step, double L_k, double Delta_min,
                       double Delta_floor) {
  const double snorm = step.norm();
  if (snorm == 0.0) return std::max(Delta_min, Delta_floor);
  const double raw =
      (f_next - f_cur - g.dot(step) - (L_k / 2.0) * step.squaredNorm()) / snorm;
  return std::max({raw, Delta_min, Delta_floor});
}

RunResult run_constant_step(InexactOracle& oracle, double L,
                            const SolverConfig& config) {
  config.validate();
  if (!(L > 0.0)) throw std::invalid_argument("run_constant_step: L must be > 0");

  const ProblemInstance& prob = oracle.problem();
  const double delta_ref = oracle.noise().delta;
  const double threshold =
      std::max(config.stop_multiplier * delta_ref, config.stop_threshold_floor);

  RunResult res;
  res.method = Method::ConstantStep;
  res.delta_max_observed = delta_ref;
  const auto t0 = Clock::now();

  Vector x = prob.x0;
  for (long k = 0;; ++k) {
    const Vector g = oracle.grad_tilde(x);
    const double gnorm = g.norm();

    IterationRecord rec;
    rec.k = k;
    if (config.record_iterates) rec.x = x;
    rec.f_exact = prob.eval_f(x);
    rec.f_tilde = rec.f_exact;
    rec.grad_tilde_norm = gnorm;
    rec.L_k = L;
    rec.n_func_calls_cum = oracle.n_func_calls();
    rec.n_grad_calls_cum = oracle.n_grad_calls();
    res.trace.push_back(rec);

    if (gnorm <= threshold) {
      res.stop_reason = StopReason::GradientCriterion;
      break;
    }
    if (k >= config.max_iterations) {
      res.stop_reason = StopReason::IterationCap;
      break;
    }
    x -= g / (2.0 * L);
    if (!finite(x)) throw_divergence(std::move(res), "run_constant_step");
  }

  res.trace.back().x = x;
  res.x_hat = x;
  res.n_iterations = static_cast<long>(res.trace.size()) - 1;
  res.wall_time_ms = elapsed_ms(t0);
  return res;
}

RunResult run_adaptive_L(InexactOracle& oracle, double Delta_known,
                         const SolverConfig& config) {
  config.validate();
  if (Delta_known < 0.0)
    throw std::invalid_argument("run_adaptive_L: Delta_known must be >= 0");

  const ProblemInstance& prob = oracle.problem();
  const double threshold = std::max(config.stop_multiplier * Delta_known,
                                    config.stop_threshold_floor);

  RunResult res;
  res.method = Method::AdaptiveL;
  res.delta_max_observed = Delta_known;
  const auto t0 = Clock::now();

  Vector x = prob.x0;
  double L = config.L0;
  double ftil_x = oracle.f_tilde(x);

  auto record = [&](long k, const Vector& xk, double ftil, double gnorm,
                    double Lk, int backtracks) {
    IterationRecord rec;
    rec.k = k;
    if (config.record_iterates) rec.x = xk;
    rec.f_exact = prob.eval_f(xk);
    rec.f_tilde = ftil;
    rec.grad_tilde_norm = gnorm;
    rec.L_k = Lk;
    rec.n_backtracks = backtracks;
    rec.n_func_calls_cum = oracle.n_func_calls();
    rec.n_grad_calls_cum = oracle.n_grad_calls();
    res.trace.push_back(std::move(rec));
  };

  for (long k = 0;; ++k) {
    const Vector g = oracle.grad_tilde(x);
    const double gnorm = g.norm();

    if (gnorm <= threshold) {
      record(k, x, ftil_x, gnorm, L, 0);
      res.stop_reason = StopReason::GradientCriterion;
      break;
    }
    if (k >= config.max_iterations) {
      record(k, x, ftil_x, gnorm, L, 0);
      res.stop_reason = StopReason::IterationCap;
      break;
    }

    int backtracks = 0;
    Vector x_next;
    double ftil_next = 0.0;
    bool capped = false;
    for (;;) {
      const Vector step = -g / (2.0 * L);
      x_next = x + step;
      if (!finite(x_next)) {
        record(k, x, ftil_x, gnorm, L, backtracks);
        throw_divergence(std::move(res), "run_adaptive_L");
      }
      ftil_next = oracle.f_tilde(x_next);
      if (!std::isfinite(ftil_next)) {
        record(k, x, ftil_x, gnorm, L, backtracks);
        throw_divergence(std::move(res), "run_adaptive_L");
      }
      if (check_condition_adaptive_l(ftil_next, ftil_x, g, step, L,
                                     Delta_known, config.delta_f)) {
        break;
      }
      L *= 2.0;
      if (++backtracks > config.max_inner_backtracks) {
        capped = true;
        break;
      }
    }
    if (capped) {
      record(k, x, ftil_x, gnorm, L, backtracks);
      res.stop_reason = StopReason::BacktrackCap;
      break;
    }

    record(k, x, ftil_x, gnorm, L, backtracks);
    x = std::move(x_next);
    ftil_x = ftil_next;  // reused: no recomputation at the accepted point
    L = std::max(L / 2.0, config.L_min);
  }

  res.trace.back().x = x;
  res.x_hat = x;
  res.n_iterations = static_cast<long>(res.trace.size()) - 1;
  res.wall_time_ms = elapsed_ms(t0);
  return res;
}

RunResult run_adaptive_L_delta(InexactOracle& oracle,
                               const SolverConfig& config) {
  config.validate();

  const ProblemInstance& prob = oracle.problem();

  RunResult res;
  res.method = Method::AdaptiveLDelta;
  const auto t0 = Clock::now();

  Vector x = prob.x0;
  double L = config.L0;
  double Delta = std::max(config.Delta0, config.Delta_min);
  double delta_floor = 0.0;  // max of the Delta_k accepted so far
  double f_x = oracle.f_exact(x);

  auto record = [&](long k, const Vector& xk, double fk, double gnorm,
                    double Lk, double Dk, int backtracks) {
    IterationRecord rec;
    rec.k = k;
    if (config.record_iterates) rec.x = xk;
    rec.f_exact = fk;
    rec.f_tilde = fk;
    rec.grad_tilde_norm = gnorm;
    rec.L_k = Lk;
    rec.Delta_k = Dk;
    rec.n_backtracks = backtracks;
    rec.n_func_calls_cum = oracle.n_func_calls();
    rec.n_grad_calls_cum = oracle.n_grad_calls();
    res.trace.push_back(std::move(rec));
  };

  for (long k = 0;; ++k) {
    const Vector g = oracle.grad_tilde(x);
    const double gnorm = g.norm();
    const double threshold = std::max(config.stop_multiplier * delta_floor,
                                      config.stop_threshold_floor);

    if (gnorm <= threshold) {
      record(k, x, f_x, gnorm, L, delta_floor, 0);
      res.stop_reason = StopReason::GradientCriterion;
      break;
    }
    if (k >= config.max_iterations) {
      record(k, x, f_x, gnorm, L, delta_floor, 0);
      res.stop_reason = StopReason::IterationCap;
      break;
    }

    if (k > 0) L = std::max(L / 2.0, config.L_min);
    Delta = std::max({Delta, delta_floor, config.Delta_min});

    // Doubling ladder: raise (L, Delta) together until the condition holds.
    int backtracks = 0;
    Vector x_next;
    double f_next = 0.0;
    bool capped = false;
    for (;;) {
      const Vector step = -g / (2.0 * L);
      x_next = x + step;
      if (!finite(x_next)) {
        record(k, x, f_x, gnorm, L, Delta, backtracks);
        throw_divergence(std::move(res), "run_adaptive_L_delta");
      }
      f_next = oracle.f_exact(x_next);
      if (!std::isfinite(f_next)) {
        record(k, x, f_x, gnorm, L, Delta, backtracks);
        throw_divergence(std::move(res), "run_adaptive_L_delta");
      }
      if (check_condition_adaptive_l_delta(f_next, f_x, g, step, L, Delta)) break;
      L *= 2.0;
      Delta *= 2.0;
      if (++backtracks > config.max_inner_backtracks) {
        capped = true;
        break;
      }
    }
    if (capped) {
      record(k, x, f_x, gnorm, L, Delta, backtracks);
      res.stop_reason = StopReason::BacktrackCap;
      break;
    }

    // Minimal feasible Delta_k, never below previous iterations' values.
    const Vector step = x_next - x;
    const double Delta_k =
        minimal_delta_k(f_next, f_x, g, step, L, config.Delta_min, delta_floor);

    // Halve L while the condition still holds with this Delta_k; on the
    // first failure keep the last satisfying (L, x_{k+1}) pair.
    double L_acc = L;
    Vector x_acc = std::move(x_next);
    double f_acc = f_next;
    for (;;) {
      const double L_half = std::max(L_acc / 2.0, config.L_min);
      if (L_half == L_acc) break;
      const Vector step_h = -g / (2.0 * L_half);
      const Vector x_h = x + step_h;
      if (!finite(x_h)) {
        record(k, x, f_x, gnorm, L_acc, Delta_k, backtracks);
        throw_divergence(std::move(res), "run_adaptive_L_delta");
      }
      const double f_h = oracle.f_exact(x_h);
      if (!std::isfinite(f_h) ||
          !check_condition_adaptive_l_delta(f_h, f_x, g, step_h, L_half,
                                            Delta_k)) {
        break;
      }
      L_acc = L_half;
      x_acc = x_h;
      f_acc = f_h;
    }

    record(k, x, f_x, gnorm, L_acc, Delta_k, backtracks);
    delta_floor = std::max(delta_floor, Delta_k);
    Delta = Delta_k;
    L = L_acc;
    x = std::move(x_acc);
    f_x = f_acc;
  }

  res.trace.back().x = x;
  res.x_hat = x;
  res.n_iterations = static_cast<long>(res.trace.size()) - 1;
  res.delta_max_observed = delta_floor;
  res.wall_time_ms = elapsed_ms(t0);
  return res;
}

}  // namespace plgd
