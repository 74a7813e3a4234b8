#include "dualkern/encoding.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dualkern/error.hpp"

namespace dualkern {

InputPoint::InputPoint(std::size_t n, std::size_t d, std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
  if (n == 0 || d == 0) throw ShapeError("input point: n and d must be positive");
  if (values_.size() != n * d) {
    throw ShapeError("input point: expected " + std::to_string(n * d) + " values, got " +
                     std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (double v : coordinate(i)) sq += v * v;
    if (!(std::abs(std::sqrt(sq) - 1.0) <= 1e-9)) {
      throw ShapeError("input point: coordinate " + std::to_string(i) + " is not a unit vector");
    }
  }
}

std::array<double, 2> encode_scalar(double x) {
  if (!(std::abs(x) <= 1.0)) throw InvalidArgument("encode_scalar: value outside [-1, 1]");
  const double angle = 0.5 * std::numbers::pi * x;
  return {std::sin(angle), std::cos(angle)};
}

std::vector<double> encode_categorical(std::size_t j, std::size_t d) {
  if (j < 1 || j > d) throw InvalidArgument("encode_categorical: category index out of range");
  std::vector<double> e(d, 0.0);
  e[j - 1] = 1.0;
  return e;
}

InputPoint encode_scalars(std::span<const double> values) {
  std::vector<double> coords;
  coords.reserve(2 * values.size());
  for (double x : values) {
    const auto e = encode_scalar(x);
    coords.push_back(e[0]);
    coords.push_back(e[1]);
  }
  return InputPoint(values.size(), 2, std::move(coords));
}

InputPoint encode_signs(std::span<const double> signs) {
  return InputPoint(signs.size(), 1, std::vector<double>(signs.begin(), signs.end()));
}

}  // namespace dualkern
