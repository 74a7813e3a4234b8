#pragma once

#include <span>

namespace dualkern {

// Normalized (probabilists') Hermite polynomials h_n = He_n / sqrt(n!),
// orthonormal under the standard Gaussian measure:
//   h_0 = 1, h_1 = x, h_{n+1}(x) = (x h_n(x) - sqrt(n) h_{n-1}(x)) / sqrt(n+1).

/// h_n(x) by the three-term recursion.
double hermite(int n, double x);

/// Fills out[k] = h_k(x) for k = 0 .. out.size()-1.
void hermite_all(double x, std::span<double> out);

/// h_n'(x) = sqrt(n) h_{n-1}(x).
double hermite_derivative(int n, double x);

/// Closed form of h_n(0): zero for odd n, (-1)^{n/2} (n-1)!! / sqrt(n!) for even n.
double hermite_at_zero(int n);

/// Evaluates sum_k coefficients[k] h_k(x) without materializing the basis.
double hermite_series(std::span<const double> coefficients, double x);

}  // namespace dualkern
