#include "dualkern/hermite.hpp"

#include <cmath>

#include "dualkern/error.hpp"

namespace dualkern {

double hermite(int n, double x) {
  if (n < 0) throw InvalidArgument("hermite: negative degree");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = (x * cur - std::sqrt(double(k)) * prev) / std::sqrt(double(k + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_all(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = x;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    out[k + 1] = (x * out[k] - std::sqrt(double(k)) * out[k - 1]) / std::sqrt(double(k + 1));
  }
}

double hermite_derivative(int n, double x) {
  if (n < 0) throw InvalidArgument("hermite_derivative: negative degree");
  if (n == 0) return 0.0;
  return std::sqrt(double(n)) * hermite(n - 1, x);
}

double hermite_at_zero(int n) {
  if (n < 0) throw InvalidArgument("hermite_at_zero: negative degree");
  if (n % 2 == 1) return 0.0;
  // (n-1)!! / sqrt(n!) accumulated as a running ratio to avoid overflow.
  double value = 1.0;
  for (int k = 2; k <= n; k += 2) {
    value *= -double(k - 1) / std::sqrt(double(k) * double(k - 1));
  }
  return value;
}

double hermite_series(std::span<const double> coefficients, double x) {
  if (coefficients.empty()) return 0.0;
  double prev = 1.0;
  double cur = x;
  double sum = coefficients[0];
  if (coefficients.size() > 1) sum += coefficients[1] * x;
  for (std::size_t k = 1; k + 1 < coefficients.size(); ++k) {
    const double next = (x * cur - std::sqrt(double(k)) * prev) / std::sqrt(double(k + 1));
    prev = cur;
    cur = next;
    sum += coefficients[k + 1] * cur;
  }
  return sum;
}

}  // namespace dualkern
