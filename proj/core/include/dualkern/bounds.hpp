#pragma once

#include <cstddef>
#include <cstdint>

#include "dualkern/skeleton.hpp"

namespace dualkern {

enum class BoundMode { c_bounded, relu };

struct BoundResult {
  /// The formula before rounding.
  double value = 0.0;
  /// ceil(value), saturated at UINT64_MAX.
  std::uint64_t r = 0;
  /// relu mode: whether eps <= 1 / depth (the regime the ReLU bound needs).
  /// Always true in c_bounded mode.
  bool regime_ok = true;
};

/// Replication sufficient for |kappa_w - kappa_S| <= eps with probability 1 - delta.
///   c_bounded: (4 C^4)^(depth + 1) log(8 |S| / delta) / eps^2
///   relu:      depth^2 log(|S| / delta) / eps^2, universal constant taken as 1
/// Throws InvalidArgument unless eps > 0, 0 < delta < 1, C >= 1 (c_bounded),
/// depth >= 1 and size >= 1.
BoundResult theorem_bound(std::size_t depth, std::size_t size, BoundMode mode, double c, double eps, double delta);
BoundResult theorem_bound(const Skeleton& skeleton, BoundMode mode, double c, double eps, double delta);

std::uint64_t theorem_bound_r(const Skeleton& skeleton, BoundMode mode, double c, double eps, double delta);

}  // namespace dualkern
