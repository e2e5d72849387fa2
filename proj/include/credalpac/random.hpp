#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace credalpac {

/// SplitMix64 finalizer (Stafford "mix13"). A bijection on 64-bit words.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Root of a deterministic family of random streams.
///
/// Substream rule: `derive(i)` has master seed
///     mix(master + (i + 1) * 0x9E3779B97F4A7C15)
/// The golden-ratio increment is odd, so distinct indices give distinct
/// pre-images, and `mix` is a bijection, so distinct indices give distinct
/// substreams. Every random quantity in the library is drawn from a stream
/// obtained this way, never from shared mutable state, which makes results
/// independent of thread scheduling.
struct SeedSpec {
  std::uint64_t master_seed = 0;

  constexpr SeedSpec derive(std::uint64_t index) const noexcept {
    return SeedSpec{splitmix64_mix(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL)};
  }

  /// Engine for this stream. std::mt19937_64 output is fully specified by the standard.
  std::mt19937_64 engine() const { return std::mt19937_64{splitmix64_mix(master_seed)}; }

  friend constexpr bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Uniform double in [0, 1) from the top 53 bits of one engine word.
template <std::uniform_random_bit_generator G>
double uniform01(G& gen) {
  static_assert(G::max() == ~std::uint64_t{0} && G::min() == 0, "needs a full 64-bit engine");
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Standard exponential variate, -log(U) with U in (0, 1].
template <std::uniform_random_bit_generator G>
double standard_exponential(G& gen) {
  return -std::log(1.0 - uniform01(gen));
}

/// Uniform integer in [0, bound) by rejection, so it is exactly uniform.
template <std::uniform_random_bit_generator G>
std::uint64_t uniform_below(G& gen, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    const std::uint64_t word = gen();
    if (word < limit) return word % bound;
  }
}

}  // namespace credalpac
