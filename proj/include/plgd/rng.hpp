#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "plgd/types.hpp"

namespace plgd {

/// Mixes a base seed with a stream id into an independent 64-bit seed
/// (SplitMix64 finalizer). Used to derive decorrelated substreams from one
/// user-facing seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic random source: std::mt19937_64 (bit-exact across platforms
/// per the C++ standard) combined with explicitly spelled-out transforms.
/// The standard distribution objects are avoided on purpose: their output is
/// implementation-defined, which would break seed-stable experiment tables.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Log-uniform double in [lo, hi], lo > 0.
  double log_uniform(double lo, double hi) {
    return lo * std::exp(uniform01() * std::log(hi / lo));
  }

  /// Standard normal via Box-Muller on two fresh uniforms. One draw per call;
  /// the sine branch is discarded so the stream layout stays call-counted.
  double gaussian() {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free modulo is biased for huge n; all uses here have n << 2^32.
    return engine_() % n;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Uniform sample from the unit sphere in R^dim (normalized Gaussian vector).
inline Vector sample_unit_sphere(Index dim, Rng& rng) {
  if (dim < 1) {
    throw std::invalid_argument("sample_unit_sphere: dim must be >= 1");
  }
  Vector u(dim);
  double norm2 = 0.0;
  do {
    for (Index i = 0; i < dim; ++i) u[i] = rng.gaussian();
    norm2 = u.squaredNorm();
  } while (norm2 == 0.0);
  return u / std::sqrt(norm2);
}

/// Deterministic Fisher-Yates shuffle driven by the seeded stream.
template <typename T>
void shuffle(Eigen::Matrix<T, Eigen::Dynamic, 1>& v, Rng& rng) {
  for (Index i = v.size() - 1; i > 0; --i) {
    const Index j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(v[i], v[j]);
  }
}

}  // namespace plgd
