#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace netad {

/// Seeded generator with portable derived distributions.
///
/// The engine is std::mt19937_64 seeded through std::seed_seq{seed, stream},
/// both of which are fully specified by the standard. The library
/// distributions (std::normal_distribution etc.) are not, so the variates
/// are derived here by fixed formulas:
///   uniform      (x >> 11) * 2^-53           one engine draw, in [0, 1)
///   exponential  -mean * log(1 - u)          one uniform
///   normal       Box-Muller, cosine branch   two uniforms, nothing cached
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace netad
