#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "dualkern/error.hpp"
#include "dualkern/hermite.hpp"
#include "dualkern/quadrature.hpp"

using namespace dualkern;

namespace {

double double_factorial(int n) {
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

}  // namespace

TEST(GaussHermite, WeightsSumToOneAndMomentsAreExact) {
  for (int n : {10, 64, 200}) {
    const auto& rule = gauss_hermite(n);
    ASSERT_EQ(rule.size(), std::size_t(n));
    EXPECT_NEAR(std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0), 1.0, 1e-13);
    for (int k = 1; 2 * k < 2 * n && k <= 8; ++k) {
      double m = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) m += rule.weights[i] * std::pow(rule.nodes[i], 2 * k);
      EXPECT_NEAR(m / double_factorial(2 * k - 1), 1.0, 1e-11) << "n=" << n << " k=" << k;
    }
  }
}

TEST(GaussHermite, NodesAreSymmetric) {
  const auto& rule = gauss_hermite(51);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    EXPECT_DOUBLE_EQ(rule.nodes[i], -rule.nodes[rule.size() - 1 - i]);
  }
}

TEST(GaussLaguerre, IntegratesPowersToFactorials) {
  const auto& rule = gauss_laguerre(40);
  double fact = 1.0;
  for (int k = 0; k <= 12; ++k) {
    if (k > 0) fact *= k;
    double m = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) m += rule.weights[i] * std::pow(rule.nodes[i], k);
    EXPECT_NEAR(m / fact, 1.0, 1e-12) << k;
  }
}

TEST(GaussianIntegrator, HalfLineMomentsOfKinkedFunctions) {
  const GaussianIntegrator integ(200);
  // E[max(0,X)] = 1/sqrt(2 pi); E[max(0,X)^2] = 1/2; E[1[X>=0]] = 1/2.
  const PiecewiseFunction relu{[](double x) { return x; }, [](double) { return 0.0; }};
  const PiecewiseFunction relu2{[](double x) { return x * x; }, [](double) { return 0.0; }};
  const PiecewiseFunction step{[](double) { return 1.0; }, [](double) { return 0.0; }};
  EXPECT_NEAR(integ.expectation(relu), 1.0 / std::sqrt(2 * M_PI), 1e-14);
  EXPECT_NEAR(integ.expectation(relu2), 0.5, 1e-14);
  EXPECT_NEAR(integ.expectation(step), 0.5, 1e-14);
}

TEST(GaussianIntegrator, MomentsAgainstHermiteBasis) {
  const GaussianIntegrator integ(100);
  const PiecewiseFunction cube{[](double x) { return x * x * x; }, std::nullopt};
  const auto m = integ.moments(cube, 6, [](double x, std::span<double> out) { hermite_all(x, out); });
  // x^3 = sqrt(6) h_3 + 3 h_1.
  EXPECT_NEAR(m[1], 3.0, 1e-12);
  EXPECT_NEAR(m[3], std::sqrt(6.0), 1e-12);
  EXPECT_NEAR(m[0], 0.0, 1e-12);
  EXPECT_NEAR(m[2], 0.0, 1e-12);
}

TEST(GaussianIntegrator, NonFiniteIntegrandThrows) {
  const GaussianIntegrator integ(64);
  const PiecewiseFunction bad{[](double x) { return std::exp(x * x * x * x); }, std::nullopt};
  EXPECT_THROW(integ.expectation(bad), NumericalError);
}
