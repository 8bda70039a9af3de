#include "plgd/problems.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "plgd/rng.hpp"

namespace plgd {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_vector(std::ostringstream& out, const char* key, const Vector& v) {
  out << key << " =";
  for (Index i = 0; i < v.size(); ++i) out << ' ' << fmt17(v[i]);
  out << '\n';
}

void append_matrix_rowmajor(std::ostringstream& out, const char* key,
                            const Matrix& M) {
  out << key << " =";
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) out << ' ' << fmt17(M(i, j));
  out << '\n';
}

/// Plain adaptive descent on exact values; used to refine reference minima.
/// Accepts a step iff f(x+) <= f(x) - ||g||^2/(4L), doubling L on rejection
/// and halving on acceptance.
Vector refine_minimum(const std::function<double(const Vector&)>& f,
                      const std::function<Vector(const Vector&)>& grad,
                      Vector x, long max_iters, double grad_tol,
                      double* f_out) {
  double fx = f(x);
  double L = 1.0;
  for (long k = 0; k < max_iters; ++k) {
    const Vector g = grad(x);
    const double g2 = g.squaredNorm();
    if (std::sqrt(g2) <= grad_tol) break;
    bool accepted = false;
    for (int b = 0; b < 200; ++b) {
      const Vector x_try = x - g / (2.0 * L);
      const double f_try = f(x_try);
      if (f_try <= fx - g2 / (4.0 * L)) {
        x = x_try;
        fx = f_try;
        L = std::max(L / 2.0, 1e-12);
        accepted = true;
        break;
      }
      L *= 2.0;
    }
    if (!accepted) break;
  }
  if (f_out) *f_out = fx;
  return x;
}

/// Minimum of ||grad f||^2 / (2 (f - f*)) over a mixed sample around x_near:
/// coordinate rays (cycled so every axis is covered), box points, sphere
/// shells, then a shrinking random local search from the best point found.
double min_pl_ratio_sample(const ProblemInstance& p, const Vector& x_near,
                           int n_samples, Rng& rng) {
  const double f_star = p.f_star;
  const double radius = (p.x0 - x_near).norm() + 1.0;
  double best = std::numeric_limits<double>::infinity();
  Vector best_x;

  auto consider = [&](const Vector& x) {
    const double gap = p.eval_f(x) - f_star;
    if (!(gap > 1e-12)) return;
    const double ratio = p.eval_grad(x).squaredNorm() / (2.0 * gap);
    if (std::isfinite(ratio) && ratio < best) {
      best = ratio;
      best_x = x;
    }
  };

  for (int s = 0; s < n_samples; ++s) {
    Vector x;
    switch (s % 4) {
      case 0: {  // coordinate ray
        const Index i = static_cast<Index>(s / 4) % p.dim;
        const double t = rng.log_uniform(1e-3 * radius, radius);
        const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        x = x_near;
        x[i] += sign * t;
        break;
      }
      case 1: {  // box
        x = x_near;
        for (Index i = 0; i < p.dim; ++i) x[i] += rng.uniform(-radius, radius);
        break;
      }
      default: {  // sphere shell
        const double t = rng.log_uniform(1e-4 * radius, radius);
        x = x_near + t * sample_unit_sphere(p.dim, rng);
        break;
      }
    }
    consider(x);
  }
  if (!std::isfinite(best)) {
    throw std::runtime_error(
        "estimate_pl_mu: no sample point with f(x) - f_star > 1e-12");
  }

  double sigma = 0.3 * radius;
  for (int r = 0; r < 300; ++r) {
    consider(best_x + sigma * sample_unit_sphere(p.dim, rng));
    sigma *= 0.985;
  }
  return best;
}

}  // namespace

std::pair<double, double> spectral_constants(const Matrix& M) {
  if (M.size() == 0) throw std::invalid_argument("spectral_constants: empty matrix");
  if (!M.allFinite())
    throw std::invalid_argument("spectral_constants: non-finite entries");
  Eigen::BDCSVD<Matrix> svd(M);
  const double sigma_max = svd.singularValues()[0];
  const Matrix MMT = M * M.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(MMT, Eigen::EigenvaluesOnly);
  const double lambda_min = eig.eigenvalues()[0];
  return {sigma_max, lambda_min};
}

ProblemInstance make_quadratic(Index n, double mu, double L, Index zero_count,
                               std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_quadratic: n must be >= 1");
  if (!(mu > 0.0) || !(L > 0.0))
    throw std::invalid_argument("make_quadratic: mu and L must be > 0");
  if (mu > L) throw std::invalid_argument("make_quadratic: mu must be <= L");
  if (zero_count < 0 || zero_count >= n)
    throw std::invalid_argument("make_quadratic: zero_count must be < n");
  const Index n_nonzero = n - zero_count;
  if (n_nonzero == 1 && mu != L)
    throw std::invalid_argument(
        "make_quadratic: a single nonzero eigenvalue needs mu == L");

  Rng rng(mix_seed(seed, 0));
  Vector diag = Vector::Zero(n);
  if (n_nonzero == 1) {
    diag[zero_count] = L;
  } else {
    diag[zero_count] = mu;
    diag[zero_count + 1] = L;
    for (Index i = zero_count + 2; i < n; ++i)
      diag[i] = rng.log_uniform(mu, L);
  }
  shuffle(diag, rng);

  auto d = std::make_shared<const Vector>(diag);

  ProblemInstance p;
  p.dim = n;
  p.family = "quadratic";
  p.seed = seed;
  p.eval_f = [d](const Vector& x) { return d->dot(x.cwiseProduct(x)); };
  p.eval_grad = [d](const Vector& x) -> Vector {
    return 2.0 * d->cwiseProduct(x);
  };
  p.lipschitz_L = L;
  p.pl_mu = mu;
  // f = sum d_i x_i^2 satisfies the PL inequality with constant 2*min_{d_i>0} d_i.
  p.pl_mu_valid = 2.0 * mu;
  p.f_star = 0.0;
  p.f_star_is_reference = false;
  p.x0 = Vector::Constant(n, 100.0);
  p.solution_distance = [d](const Vector& x) {
    double s = 0.0;
    for (Index i = 0; i < d->size(); ++i)
      if ((*d)[i] > 0.0) s += x[i] * x[i];
    return std::sqrt(s);
  };
  p.quadratic = QuadraticSpec{diag, zero_count};
  return p;
}

ProblemInstance make_logistic(Index n, Index m, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_logistic: n must be >= 1");
  if (m < 2) throw std::invalid_argument("make_logistic: m must be >= 2");

  Rng rng(mix_seed(seed, 1));
  Matrix W(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) W(i, j) = rng.gaussian();

  Vector separator(n);
  for (Index j = 0; j < n; ++j) separator[j] = rng.gaussian();

  Vector y(m);
  for (Index i = 0; i < m; ++i) {
    const double z = W.row(i).dot(separator);
    y[i] = z >= 0.0 ? 1.0 : -1.0;
  }
  // Flip 10% of the labels; the mislabeled points make the loss coercive, so
  // a finite minimizer exists (verified empirically by the refinement below).
  Eigen::Matrix<Index, Eigen::Dynamic, 1> perm(m);
  for (Index i = 0; i < m; ++i) perm[i] = i;
  shuffle(perm, rng);
  for (Index i = 0; i < m / 10; ++i) y[perm[i]] = -y[perm[i]];

  auto Wp = std::make_shared<const Matrix>(W);
  auto yp = std::make_shared<const Vector>(y);
  const double inv_m = 1.0 / static_cast<double>(m);

  auto eval_f = [Wp, yp, inv_m](const Vector& x) {
    const Vector z = (*Wp) * x;
    double s = 0.0;
    for (Index i = 0; i < z.size(); ++i) {
      const double t = -(*yp)[i] * z[i];
      s += t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
    }
    return s * inv_m;
  };
  auto eval_grad = [Wp, yp, inv_m](const Vector& x) -> Vector {
    const Vector z = (*Wp) * x;
    Vector w(z.size());
    for (Index i = 0; i < z.size(); ++i) {
      const double t = -(*yp)[i] * z[i];
      const double sig = t > 0.0 ? 1.0 / (1.0 + std::exp(-t))
                                 : std::exp(t) / (1.0 + std::exp(t));
      w[i] = -(*yp)[i] * sig;
    }
    return inv_m * (Wp->transpose() * w);
  };

  ProblemInstance p;
  p.dim = n;
  p.family = "logistic";
  p.seed = seed;
  p.eval_f = eval_f;
  p.eval_grad = eval_grad;
  p.lipschitz_L = spectral_constants(W).first;
  p.lipschitz_L = p.lipschitz_L * p.lipschitz_L / (4.0 * static_cast<double>(m));
  p.x0 = Vector::Zero(n);
  p.logistic = LogisticSpec{W, y, m, n};

  double f_ref = 0.0;
  const Vector x_ref =
      refine_minimum(eval_f, eval_grad, p.x0, 100000, 1e-9, &f_ref);
  p.f_star = f_ref;
  p.f_star_is_reference = true;

  Rng mu_rng(mix_seed(seed, 2));
  p.pl_mu_valid = min_pl_ratio_sample(p, x_ref, 2000, mu_rng);
  p.pl_mu = p.pl_mu_valid;
  return p;
}

ProblemInstance make_trig_system(Index n, Index m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("make_trig_system: m must be >= 1");
  if (2 * m > n)
    throw std::invalid_argument("make_trig_system: need 2m <= n");

  Rng rng(mix_seed(seed, 3));
  Matrix G(n, 2 * m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < 2 * m; ++j) G(i, j) = rng.gaussian();
  const Eigen::HouseholderQR<Matrix> qr(G);
  const Matrix Q = qr.householderQ() * Matrix::Identity(n, 2 * m);

  Matrix A(m, n), B(m, n);
  for (Index i = 0; i < m; ++i) {
    A.row(i) = rng.log_uniform(0.5, 4.0) * Q.col(i).transpose();
    B.row(i) = rng.log_uniform(0.5, 4.0) * Q.col(m + i).transpose();
  }

  Vector planted(n);
  for (Index j = 0; j < n; ++j) planted[j] = rng.uniform(-kPi, kPi);

  auto Ap = std::make_shared<const Matrix>(A);
  auto Bp = std::make_shared<const Matrix>(B);
  const Vector targets =
      A * planted.array().sin().matrix() + B * planted.array().cos().matrix();
  auto Ep = std::make_shared<const Vector>(targets);

  auto residual = [Ap, Bp, Ep](const Vector& x) -> Vector {
    return (*Ap) * x.array().sin().matrix() +
           (*Bp) * x.array().cos().matrix() - (*Ep);
  };
  auto eval_f = [residual](const Vector& x) {
    return residual(x).squaredNorm();
  };
  // J_ij = A_ij cos(x_j) - B_ij sin(x_j); grad f = 2 J^T r.
  auto eval_grad = [Ap, Bp, residual](const Vector& x) -> Vector {
    const Vector r = residual(x);
    const Vector at_r = Ap->transpose() * r;
    const Vector bt_r = Bp->transpose() * r;
    return 2.0 * (x.array().cos() * at_r.array() -
                  x.array().sin() * bt_r.array())
                     .matrix();
  };

  ProblemInstance p;
  p.dim = n;
  p.family = "trig";
  p.seed = seed;
  p.eval_f = eval_f;
  p.eval_grad = eval_grad;

  Matrix AB(m, 2 * n);
  AB << A, B;
  p.lipschitz_L = 8.0 * std::sqrt(2.0) * std::pow(spectral_constants(AB).first, 2);
  p.pl_mu =
      std::min(spectral_constants(A).second, spectral_constants(B).second);

  p.f_star = 0.0;
  p.f_star_is_reference = false;
  p.x0 = Vector::Ones(n);
  p.trig = TrigSystemSpec{A, B, targets, planted};

  // Pointwise the PL inequality holds with 2*lambda_min(J J^T); take the
  // smallest value over a sample of the operating box plus a shrinking local
  // search toward where that eigenvalue dips.
  auto lambda_min_jjt = [&](const Vector& x) {
    const Matrix J = A * x.array().cos().matrix().asDiagonal() -
                     B * x.array().sin().matrix().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(J * J.transpose(),
                                              Eigen::EigenvaluesOnly);
    return eig.eigenvalues()[0];
  };
  Rng mu_rng(mix_seed(seed, 4));
  double lam_best = std::numeric_limits<double>::infinity();
  Vector x_best = p.x0;
  auto consider = [&](const Vector& x) {
    const double lam = lambda_min_jjt(x);
    if (lam < lam_best) {
      lam_best = lam;
      x_best = x;
    }
  };
  consider(p.x0);
  consider(planted);
  for (int s = 0; s < 600; ++s) {
    Vector x(n);
    for (Index j = 0; j < n; ++j) x[j] = mu_rng.uniform(-kPi, kPi);
    consider(x);
  }
  double sigma = 1.0;
  for (int r = 0; r < 200; ++r) {
    consider(x_best + sigma * sample_unit_sphere(n, mu_rng));
    sigma *= 0.98;
  }
  p.pl_mu_valid = 2.0 * lam_best;
  return p;
}

double estimate_pl_mu(const ProblemInstance& problem, int n_samples,
                      std::uint64_t seed) {
  if (n_samples < 1)
    throw std::invalid_argument("estimate_pl_mu: n_samples must be >= 1");
  Rng rng(seed);
  const Vector x_near = refine_minimum(problem.eval_f, problem.eval_grad,
                                       problem.x0, 20000, 1e-9, nullptr);
  return min_pl_ratio_sample(problem, x_near, n_samples, rng);
}

std::string serialize_problem(const ProblemInstance& p) {
  std::ostringstream out;
  out << "family = " << p.family << '\n';
  out << "n = " << p.dim << '\n';
  out << "seed = " << p.seed << '\n';
  out << "L = " << fmt17(p.lipschitz_L) << '\n';
  out << "mu = " << fmt17(p.pl_mu) << '\n';
  out << "mu_valid = " << fmt17(p.pl_mu_valid) << '\n';
  out << "f_star = " << fmt17(p.f_star) << '\n';
  out << "f_star_is_reference = " << (p.f_star_is_reference ? 1 : 0) << '\n';
  append_vector(out, "x0", p.x0);
  if (p.quadratic) {
    out << "zero_count = " << p.quadratic->n_zero << '\n';
    append_vector(out, "diag", p.quadratic->diag);
  }
  if (p.logistic) {
    out << "m = " << p.logistic->m << '\n';
    append_vector(out, "labels", p.logistic->labels);
    append_matrix_rowmajor(out, "features", p.logistic->features);
  }
  if (p.trig) {
    out << "m = " << p.trig->A.rows() << '\n';
    append_matrix_rowmajor(out, "A", p.trig->A);
    append_matrix_rowmajor(out, "B", p.trig->B);
    append_vector(out, "targets", p.trig->targets);
    append_vector(out, "planted_solution", p.trig->planted_solution);
  }
  return out.str();
}

}  // namespace plgd
