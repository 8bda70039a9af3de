#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "plgd/types.hpp"

namespace plgd::testing {

/// Central finite differences with step h = 1e-5 * (1 + ||x||).
inline Vector finite_difference_gradient(
    const std::function<double(const Vector&)>& f, const Vector& x) {
  const double h = 1e-5 * (1.0 + x.norm());
  Vector g(x.size());
  Vector xp = x, xm = x;
  for (Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

/// Largest eigenvalue of the symmetric matrix S by plain power iteration.
inline double power_iteration_lambda_max(const Matrix& S, int iters = 20000) {
  Vector v = Vector::Ones(S.rows());
  v[0] += 0.5;  // break symmetry against adversarial starts
  v.normalize();
  double lambda = 0.0;
  for (int i = 0; i < iters; ++i) {
    Vector w = S * v;
    lambda = v.dot(w);
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
  }
  return lambda;
}

/// Independent spectral oracle: sigma_max(M) and lambda_min(M M^T) via power
/// iteration on M M^T and on (lambda_max I - M M^T).
inline std::pair<double, double> spectral_oracle(const Matrix& M) {
  const Matrix S = M * M.transpose();
  const double lmax = power_iteration_lambda_max(S);
  const Matrix shifted =
      Matrix::Identity(S.rows(), S.cols()) * lmax * (1.0 + 1e-6) - S;
  const double l2 = power_iteration_lambda_max(shifted);
  const double lmin = lmax * (1.0 + 1e-6) - l2;
  return {std::sqrt(lmax), lmin};
}

// Extended-precision (long double) evaluations of the closed-form bounds;
// independent of the library's double-precision code path.

struct BoundInputsLD {
  long double L, mu, f0_gap, Delta, Delta_min, L_min;
};

inline long double n_star_adaptive_l_ld(const BoundInputsLD& in) {
  const long double arg = in.mu * in.f0_gap / (in.Delta * in.Delta);
  if (arg <= 1.0L) return 0.0L;
  return std::ceil(8.0L * in.L / in.mu * std::log(arg));
}

inline long double distance_bound_adaptive_l_ld(const BoundInputsLD& in,
                                                long double gamma) {
  const long double arg = in.mu * in.f0_gap / (in.Delta * in.Delta);
  long double first = 0.0L;
  if (arg > 1.0L) {
    first = 8.0L * in.Delta / in.mu *
            std::sqrt(gamma * gamma / 2.0L + 4.0L * gamma * in.L / in.mu) *
            std::log(arg);
  }
  return first + 16.0L * std::sqrt(gamma * in.L * in.f0_gap) / in.mu;
}

inline std::pair<long double, long double> envelopes_ld(
    const BoundInputsLD& in) {
  return {in.L * std::max(in.Delta / in.Delta_min, 1.0L),
          2.0L * in.Delta * std::max(in.L / in.L_min, 1.0L)};
}

inline long double n_star_adaptive_l_delta_ld(const BoundInputsLD& in) {
  const auto [L_max, D_max] = envelopes_ld(in);
  const long double arg = in.mu * in.f0_gap / (4.0L * D_max * D_max);
  if (arg <= 1.0L) return 0.0L;
  return std::ceil(8.0L * L_max / in.mu * std::log(arg));
}

inline long double distance_bound_adaptive_l_delta_ld(const BoundInputsLD& in) {
  const auto [L_max, D_max] = envelopes_ld(in);
  const long double gamma = 4.0L * L_max / in.mu;
  const long double arg = in.mu * in.f0_gap / (4.0L * D_max * D_max);
  long double first = 0.0L;
  if (arg > 1.0L) {
    first = 8.0L * D_max / in.mu *
            std::sqrt(gamma * gamma / 2.0L + 2.0L * gamma * L_max / in.mu) *
            std::log(arg);
  }
  return first + 16.0L * std::sqrt(gamma * L_max * in.f0_gap) / in.mu;
}

inline long double func_eval_bound_ld(const BoundInputsLD& in,
                                      long double n_star) {
  return n_star * std::log2(4.0L * in.L / in.L_min *
                            std::max(in.L / in.L_min, in.Delta / in.Delta_min));
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace plgd::testing
