#include "dualkern/bounds.hpp"

#include <cmath>
#include <limits>

#include "dualkern/error.hpp"

namespace dualkern {

BoundResult theorem_bound(std::size_t depth, std::size_t size, BoundMode mode, double c, double eps, double delta) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("bound: eps must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("bound: delta must lie in (0, 1)");
  if (depth < 1 || size < 1) throw InvalidArgument("bound: depth and |S| must be >= 1");

  BoundResult out;
  const double d = double(depth);
  if (mode == BoundMode::c_bounded) {
    if (!(c >= 1.0) || !std::isfinite(c)) throw InvalidArgument("bound: C must be >= 1");
    const double base = 4.0 * std::pow(c, 4.0);
    out.value = std::pow(base, d + 1.0) * std::log(8.0 * double(size) / delta) / (eps * eps);
  } else {
    out.value = d * d * std::log(double(size) / delta) / (eps * eps);
    out.regime_ok = eps <= 1.0 / d;
  }
  constexpr double cap = 18446744073709549568.0;  // largest double below 2^64
  const double up = std::ceil(out.value);
  out.r = up >= cap ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t(up);
  return out;
}

BoundResult theorem_bound(const Skeleton& skeleton, BoundMode mode, double c, double eps, double delta) {
  return theorem_bound(skeleton.depth(), skeleton.size(), mode, c, eps, delta);
}

std::uint64_t theorem_bound_r(const Skeleton& skeleton, BoundMode mode, double c, double eps, double delta) {
  return theorem_bound(skeleton, mode, c, eps, delta).r;
}

}  // namespace dualkern
