#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>

namespace mgids {

// splitmix64 step, used for seed derivation.
inline std::uint64_t mix_bits(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a stream seed from a base seed and a list of tags. Used to give
// every (draw, episode, purpose) its own independent, reproducible stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = mix_bits(base ^ 0x8f3ad1c4e1a7b2d9ULL);
  for (std::uint64_t t : tags) s = mix_bits(s ^ mix_bits(t));
  return s;
}

// Deterministic random stream. The raw generator is std::mt19937_64 (whose
// output sequence is fixed by the standard); all distributions are sampled
// in-house so results are identical across platforms and library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  int next_int(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::next_int: n must be positive");
    return static_cast<int>(next_double() * n) % n;
  }

  // Categorical draw by CDF walk; weights need not be normalized.
  int categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("Rng::categorical: nonpositive total weight");
    double u = next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  // Standard normal via the polar method.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  // Gamma(shape, 1) via Marsaglia-Tsang, with the boost for shape < 1.
  double next_gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("Rng::next_gamma: shape must be positive");
    if (shape < 1.0) {
      double u = next_double();
      while (u == 0.0) u = next_double();
      return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = next_normal();
      double t = 1.0 + c * x;
      if (t <= 0.0) continue;
      double v = t * t * t;
      double u = next_double();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Dirichlet draw written into `out` (same length as alpha).
  void next_dirichlet(std::span<const double> alpha, std::span<double> out) {
    double total = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      out[i] = next_gamma(alpha[i]);
      total += out[i];
    }
    if (total <= 0.0) {
      // All gammas underflowed; fall back to the largest-alpha vertex.
      std::size_t best = 0;
      for (std::size_t i = 1; i < alpha.size(); ++i)
        if (alpha[i] > alpha[best]) best = i;
      for (std::size_t i = 0; i < alpha.size(); ++i) out[i] = (i == best) ? 1.0 : 0.0;
      return;
    }
    for (std::size_t i = 0; i < alpha.size(); ++i) out[i] /= total;
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mgids
