#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dualkern/hermite.hpp"

using namespace dualkern;

namespace {

// Explicit normalized polynomials He_n / sqrt(n!).
double h_explicit(int n, double x) {
  switch (n) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return (x * x - 1.0) / std::sqrt(2.0);
    case 3: return (x * x * x - 3.0 * x) / std::sqrt(6.0);
    case 4: return (x * x * x * x - 6.0 * x * x + 3.0) / std::sqrt(24.0);
    case 5: return (std::pow(x, 5) - 10.0 * std::pow(x, 3) + 15.0 * x) / std::sqrt(120.0);
    default: return NAN;
  }
}

}  // namespace

TEST(Hermite, MatchesExplicitLowDegreePolynomials) {
  for (int n = 0; n <= 5; ++n) {
    for (double x : {-3.0, -1.2, 0.0, 0.4, 2.5}) {
      EXPECT_NEAR(hermite(n, x), h_explicit(n, x), 1e-12) << "n=" << n << " x=" << x;
    }
  }
}

TEST(Hermite, AllAgreesWithSingleEvaluation) {
  std::vector<double> out(30);
  hermite_all(1.7, out);
  for (int n = 0; n < 30; ++n) EXPECT_NEAR(out[n], hermite(n, 1.7), 1e-12);
}

TEST(Hermite, DerivativeIsScaledLowerPolynomial) {
  // Central difference against h_n'.
  const double eps = 1e-6;
  for (int n = 1; n <= 8; ++n) {
    const double fd = (hermite(n, 0.3 + eps) - hermite(n, 0.3 - eps)) / (2 * eps);
    EXPECT_NEAR(hermite_derivative(n, 0.3), fd, 1e-7);
  }
  EXPECT_EQ(hermite_derivative(0, 2.0), 0.0);
}

TEST(Hermite, ValueAtZero) {
  EXPECT_DOUBLE_EQ(hermite_at_zero(0), 1.0);
  EXPECT_DOUBLE_EQ(hermite_at_zero(3), 0.0);
  EXPECT_NEAR(hermite_at_zero(2), -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(hermite_at_zero(4), 3.0 / std::sqrt(24.0), 1e-15);
  for (int n = 0; n <= 60; ++n) EXPECT_NEAR(hermite_at_zero(n), hermite(n, 0.0), 1e-12) << n;
}

TEST(Hermite, SeriesEvaluation) {
  const std::vector<double> c = {0.5, -1.0, 0.25, 0.0, 2.0};
  double expect = 0.0;
  for (int k = 0; k < 5; ++k) expect += c[k] * h_explicit(k, 0.8);
  EXPECT_NEAR(hermite_series(c, 0.8), expect, 1e-12);
}
