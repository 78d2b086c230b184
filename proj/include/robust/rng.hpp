#pragma once

#include <cstdint>

namespace robust {

// splitmix64: deterministic across platforms and worker counts, which the
// reproducibility contract needs; std::uniform_int_distribution is not.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Unbiased bounded draw (rejection sampling).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }
};

// Documented stream-splitting rule: replicate i draws from
// splitmix64 seeded with master ^ golden*(i+1), pre-mixed once.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 mix(master ^ (0x9E3779B97F4A7C15ull * (index + 1)));
  return mix.next();
}

}  // namespace robust
