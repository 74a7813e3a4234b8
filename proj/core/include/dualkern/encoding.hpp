#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace dualkern {

/// An input x = (x^1, ..., x^n) with each coordinate a unit vector in R^d.
/// Stored contiguously, coordinate-major.
class InputPoint {
 public:
  /// Validates ||x^i|| = 1 within 1e-9; throws ShapeError otherwise.
  InputPoint(std::size_t n, std::size_t d, std::vector<double> values);

  std::size_t coordinate_count() const noexcept { return n_; }
  std::size_t coordinate_dim() const noexcept { return d_; }
  std::span<const double> coordinate(std::size_t i) const { return {values_.data() + i * d_, d_}; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const InputPoint&, const InputPoint&) = default;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> values_;
};

/// [-1, 1] -> S^1, x -> (sin(pi x / 2), cos(pi x / 2)).
std::array<double, 2> encode_scalar(double x);

/// Category j in 1..d -> standard basis vector e_j.
std::vector<double> encode_categorical(std::size_t j, std::size_t d);

/// n scalars in [-1, 1], each encoded onto the circle (d = 2).
InputPoint encode_scalars(std::span<const double> values);

/// n signs (+-1) as a point with d = 1.
InputPoint encode_signs(std::span<const double> signs);

}  // namespace dualkern
