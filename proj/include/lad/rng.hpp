#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "lad/common.hpp"

namespace lad {

// splitmix64 finalizer. Used to derive independent stream seeds from a base
// seed, e.g. one seed per K in a sweep or per review in an evaluation run.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base ^ mix64(stream));
}

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard, and every variate transform below
// is implemented explicitly (never via std::*_distribution, whose algorithms
// are implementation-defined). Identical seeds therefore produce identical
// streams on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). bound must be positive.
  int uniform_int(int bound) {
    internal_check(bound > 0, "Rng::uniform_int: bound must be positive");
    // Rejection below the largest multiple of bound, so the draw is unbiased.
    const std::uint64_t b = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<int>(x % b);
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  // Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 handled by boosting to
  // shape + 1 and scaling with U^(1/shape).
  double gamma(double shape) {
    internal_check(shape > 0.0, "Rng::gamma: shape must be positive");
    if (shape < 1.0) {
      const double u = 1.0 - uniform();  // (0, 1]
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Symmetric Dirichlet draw: dim independent Gamma(concentration) variates,
  // normalized.
  void dirichlet(double concentration, std::span<double> out) {
    internal_check(concentration > 0.0, "Rng::dirichlet: concentration must be positive");
    double sum = 0.0;
    for (double& v : out) {
      v = gamma(concentration);
      sum += v;
    }
    if (sum <= 0.0) {  // total underflow; fall back to uniform
      for (double& v : out) v = 1.0 / static_cast<double>(out.size());
      return;
    }
    for (double& v : out) v /= sum;
  }

  // Draw an index proportional to nonnegative weights (CDF inversion).
  int categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    internal_check(total > 0.0, "Rng::categorical: weights must have positive mass");
    double target = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (target < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lad
