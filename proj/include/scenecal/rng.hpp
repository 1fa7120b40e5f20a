#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace scenecal {

/// Seedable random source with fully specified output mappings.
///
/// The raw generator is std::mt19937_64, whose algorithm is fixed by the
/// C++ standard. The uniform and normal mappings below are implemented here
/// instead of using std::*_distribution, whose sequences are
/// implementation-defined; this keeps seeded results identical across
/// standard libraries and platforms.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1): top 53 bits of the raw draw.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). Modulo mapping; the bias is far below any
  /// tolerance used in this project for the small n involved.
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  /// Standard normal via Box-Muller (cosine branch, one value per pair of
  /// uniforms; the sine value is discarded to keep the stream stateless).
  double normal(double mean, double stddev) {
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Derives an independent stream seed from (seed, stream index) with a
  /// SplitMix64 finalizer, so per-iteration streams do not depend on how
  /// many draws earlier iterations made.
  static std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace scenecal
