#include "dualkern/rng.hpp"

#include <cmath>
#include <numbers>

namespace dualkern {

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::array<std::uint32_t, 2> k) noexcept {
  constexpr std::uint64_t m0 = 0xD2511F53;
  constexpr std::uint64_t m1 = 0xCD9E8D57;
  constexpr std::uint32_t w0 = 0x9E3779B9;
  constexpr std::uint32_t w1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = m0 * c[0];
    const std::uint64_t p1 = m1 * c[2];
    const auto hi0 = std::uint32_t(p0 >> 32);
    const auto lo0 = std::uint32_t(p0);
    const auto hi1 = std::uint32_t(p1 >> 32);
    const auto lo1 = std::uint32_t(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += w0;
    k[1] += w1;
  }
  return c;
}

std::array<std::uint32_t, 4> CounterRng::block(std::uint64_t stream, std::uint64_t counter) const noexcept {
  return philox4x32_10({std::uint32_t(counter), std::uint32_t(counter >> 32), std::uint32_t(stream),
                        std::uint32_t(stream >> 32)},
                       {std::uint32_t(seed_), std::uint32_t(seed_ >> 32)});
}

namespace {
double to_open_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = ((std::uint64_t(hi) << 32) | lo) >> 11;
  return (double(bits) + 0.5) * 0x1.0p-53;
}
}  // namespace

double CounterRng::uniform(std::uint64_t stream, std::uint64_t counter) const noexcept {
  const auto b = block(stream, counter);
  return to_open_unit(b[0], b[1]);
}

double CounterRng::normal(std::uint64_t stream, std::uint64_t counter) const noexcept {
  const auto b = block(stream, counter);
  const double u1 = to_open_unit(b[0], b[1]);
  const double u2 = to_open_unit(b[2], b[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept {
  const auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  std::uint64_t state = mix(master);
  for (std::uint64_t index : path) state = mix(state ^ mix(index + 0x632BE59BD9B4E019ULL));
  return state;
}

}  // namespace dualkern
