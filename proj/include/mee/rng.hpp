#pragma once

#include <cstdint>
#include <random>

namespace mee {

// Deterministic draws for a given seed: all transforms are implemented on top
// of the raw mt19937_64 stream, so output does not depend on the standard
// library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Strictly inside (0, 1); safe as input to inverse transforms.
  double uniform01();
  // Rate-1 exponential.
  double exponential();
  // Standard normal (Box-Muller, both values used).
  double normal();
  // Gamma(shape, 1), shape > 0 (Marsaglia-Tsang; Johnk boost for shape < 1).
  double gamma(double shape);

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// Stable per-row seed: mixes (master, a, b) through splitmix64 rounds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

}  // namespace mee
