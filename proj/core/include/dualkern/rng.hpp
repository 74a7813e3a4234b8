#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace dualkern {

/// Philox4x32-10 counter-based generator. Every draw is a pure function of
/// (seed, stream, counter), so draws can be made in any order or in parallel.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Raw 128-bit block for counter (counter, stream).
  std::array<std::uint32_t, 4> block(std::uint64_t stream, std::uint64_t counter) const noexcept;

  /// Uniform in the open interval (0, 1), 53-bit resolution.
  double uniform(std::uint64_t stream, std::uint64_t counter) const noexcept;

  /// Standard normal by Box-Muller on one block.
  double normal(std::uint64_t stream, std::uint64_t counter) const noexcept;

 private:
  std::uint64_t seed_;
};

/// Philox4x32-10 bijection on a 128-bit counter under a 64-bit key.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Child seed for a path of indices under a master seed (SplitMix64 chaining).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept;

}  // namespace dualkern
