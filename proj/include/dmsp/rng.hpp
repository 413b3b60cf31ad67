#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dmsp {

// Deterministic random stream. The raw mt19937_64 sequence is mandated by the
// C++ standard, and all value mappings below are plain arithmetic on that
// sequence, so identical seeds give identical doubles on every conforming
// toolchain (std::normal_distribution et al. make no such promise).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double prob) { return uniform() < prob; }

  // Standard normal via the trigonometric Box-Muller transform. Each pair of
  // uniforms yields two normals; the spare is cached, so the draw count per
  // normal is fixed and streams stay aligned across runs.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log1p(-u1));  // log(1-u1), u1 < 1 always
    double z0 = r * std::cos(6.283185307179586477 * u2);
    spare_ = r * std::sin(6.283185307179586477 * u2);
    has_spare_ = true;
    return z0;
  }

  // Derives an independent stream id from (seed, a, b); used to key network
  // snapshots by (outer iteration, consensus round) without consuming the
  // main stream. splitmix64 finalizer.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b) {
    return mix(mix(mix(seed) ^ a) ^ b);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dmsp
