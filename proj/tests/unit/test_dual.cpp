#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "dualkern/activation.hpp"
#include "dualkern/dual.hpp"
#include "dualkern/error.hpp"
#include "dualkern/quadrature.hpp"

using namespace dualkern;

namespace {

double fact(int n) { return std::tgamma(n + 1.0); }

double dfact(int n) {
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

// Analytic dual coefficients of the normalized ReLU and step.
double relu_b(int i) {
  if (i == 0) return 1.0 / M_PI;
  if (i == 1) return 0.5;
  if (i % 2) return 0.0;
  const double d = dfact(i - 3);
  return d * d / (M_PI * fact(i));
}

double step_b(int i) {
  if (i == 0) return 0.5;
  if (i % 2 == 0) return 0.0;
  const double d = dfact(i - 2);
  return d * d / (M_PI * fact(i));
}

// E[f(X) f(Y)] for unit-variance Gaussians with correlation rho, by tensor Gauss-Hermite.
double correlated_expectation(const Activation& f, double rho, int n = 80) {
  const auto& rule = gauss_hermite(n);
  const double s = std::sqrt(1.0 - rho * rho);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = rule.nodes[i];
      acc += rule.weights[i] * rule.weights[j] * f(x) * f(rho * x + s * rule.nodes[j]);
    }
  }
  return acc;
}

// E[f(X) f(Y)] for the normalized ReLU / step: inner Gaussian expectation in
// closed form, outer integral over x > 0 by composite Simpson.
double half_line_simpson(const std::function<double(double)>& g) {
  const int n = 200000;
  const double h = 40.0 / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * g(x) * std::exp(-0.5 * x * x);
  }
  return s * h / 3.0 / std::sqrt(2.0 * M_PI);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double relu_oracle(double rho) {
  const double s = std::sqrt(1.0 - rho * rho);
  return half_line_simpson([&](double x) {
    const double mu = rho * x;
    const double inner = mu * normal_cdf(mu / s) + s * std::exp(-0.5 * mu * mu / (s * s)) / std::sqrt(2.0 * M_PI);
    return 2.0 * x * inner;
  });
}

double step_oracle(double rho) {
  const double s = std::sqrt(1.0 - rho * rho);
  return half_line_simpson([&](double x) { return 2.0 * normal_cdf(rho * x / s); });
}

std::vector<double> grid401() {
  std::vector<double> g;
  for (int k = 0; k <= 400; ++k) g.push_back(-1.0 + k / 200.0);
  return g;
}

}  // namespace

TEST(Dual, ReluCoefficientsExact) {
  const auto d = dual_of(make_activation(ActivationKind::relu));
  const double expect[] = {1 / M_PI, 0.5, 1 / (2 * M_PI), 0.0, 1 / (24 * M_PI), 0.0, 1 / (80 * M_PI)};
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(d.coefficients()[i], expect[i], 1e-12) << i;
  for (int i = 0; i <= 50; ++i) EXPECT_NEAR(d.coefficients()[i], relu_b(i), 1e-13) << i;
}

TEST(Dual, StepCoefficientsExact) {
  const auto d = dual_of(make_activation(ActivationKind::step));
  const double expect[] = {0.5, 1 / M_PI, 0.0, 1 / (6 * M_PI), 0.0, 3 / (40 * M_PI), 0.0};
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(d.coefficients()[i], expect[i], 1e-12) << i;
  for (int n = 1; n <= 11; n += 2) EXPECT_NEAR(d.coefficients()[n], step_b(n), 1e-12) << n;
}

TEST(Dual, HermiteCoefficientsOfStepAndRelu) {
  const auto step = hermite_expand(make_activation(ActivationKind::step));
  EXPECT_NEAR(step.coefficients[0], 1 / std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(step.coefficients[1], 1 / std::sqrt(M_PI), 1e-13);
  EXPECT_NEAR(step.coefficients[2], 0.0, 1e-13);
  const auto relu = hermite_expand(make_activation(ActivationKind::relu));
  EXPECT_NEAR(relu.coefficients[0], 1 / std::sqrt(M_PI), 1e-13);
  const auto id = hermite_expand(make_activation(ActivationKind::identity));
  for (int i = 0; i <= id.degree(); ++i) EXPECT_NEAR(id.coefficients[i], i == 1 ? 1.0 : 0.0, 1e-13);
}

TEST(Dual, ReluPartialSums) {
  const auto b = dual_of(make_activation(ActivationKind::relu)).coefficients();
  double s = 0.0;
  std::vector<double> partial;
  for (int i = 0; i <= 6; ++i) {
    s += b[i];
    partial.push_back(s);
  }
  EXPECT_NEAR(partial[2], 0.9774, 5e-4);
  EXPECT_NEAR(partial[4], 0.9907, 5e-4);
  EXPECT_NEAR(partial[6], 0.9947, 5e-4);
}

TEST(Dual, ExponentialAndSineCoefficients) {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto e = dual_of(make_activation(ActivationKind::exponential, a));
    const auto s = dual_of(make_activation(ActivationKind::sine, a));
    for (int i = 0; i <= 12; ++i) {
      EXPECT_NEAR(e.coefficients()[i], std::exp(-a * a) * std::pow(a, 2 * i) / fact(i), 1e-12);
      const double sb = i % 2 ? std::pow(a, 2 * i) / (fact(i) * std::sinh(a * a)) : 0.0;
      EXPECT_NEAR(s.coefficients()[i], sb, 1e-12);
    }
  }
  const auto h2 = dual_of(make_activation(ActivationKind::hermite, 2.0));
  for (int i = 0; i <= 10; ++i) EXPECT_NEAR(h2.coefficients()[i], i == 2 ? 1.0 : 0.0, 1e-13);
}

TEST(Dual, ClosedFormsAgainstBivariateQuadrature) {
  for (const auto& act : {make_activation(ActivationKind::exponential, 0.8),
                          make_activation(ActivationKind::sine, 1.1),
                          make_activation(ActivationKind::hermite, 3.0)}) {
    const auto d = dual_of(act);
    ASSERT_TRUE(d.closed_form().has_value());
    for (double rho : {-0.9, -0.3, 0.0, 0.45, 0.95}) {
      EXPECT_NEAR(d(rho), correlated_expectation(act, rho), 1e-10) << act.token() << " rho=" << rho;
    }
  }
}

TEST(Dual, ReluAndStepClosedFormsAgainstQuadrature) {
  for (double rho : {-0.95, -0.7, 0.0, 0.5, 0.9}) {
    EXPECT_NEAR(relu_dual(rho), relu_oracle(rho), 1e-10);
    EXPECT_NEAR(step_dual(rho), step_oracle(rho), 1e-10);
  }
  EXPECT_NEAR(relu_dual(0.0), 1 / M_PI, 1e-15);
  EXPECT_NEAR(relu_dual(-1.0), 0.0, 1e-15);
  EXPECT_NEAR(relu_dual(1.0), 1.0, 1e-15);
  EXPECT_NEAR(step_dual(0.0), 0.5, 1e-15);
}

TEST(Dual, RawSineDual) {
  const auto d = dual_of(Activation::raw(ActivationKind::sine, 1.0));
  for (double rho : {-0.5, 0.2, 1.0}) EXPECT_NEAR(d(rho), std::exp(-1.0) * std::sinh(rho), 1e-12);
  const auto e = dual_of(Activation::raw(ActivationKind::exponential, 1.0));
  for (double rho : {-0.5, 0.2, 1.0}) EXPECT_NEAR(e(rho), std::exp(1.0 + rho), 1e-10);
}

TEST(Dual, NormalizationOfSmoothMembers) {
  for (const auto& act : {make_activation(ActivationKind::identity), make_activation(ActivationKind::exponential, 2.0),
                          make_activation(ActivationKind::sine, 2.0), make_activation(ActivationKind::hermite, 6.0)}) {
    const auto b = dual_of(act).coefficients();
    double s = 0.0;
    for (double v : b) s += v;
    EXPECT_NEAR(s, 1.0, 1e-4) << act.token();
  }
}

TEST(Dual, SeriesMatchesClosedFormForSmoothMembers) {
  for (const auto& act : {make_activation(ActivationKind::exponential, 1.0), make_activation(ActivationKind::exponential, 2.0),
                          make_activation(ActivationKind::sine, 1.0), make_activation(ActivationKind::sine, 2.0),
                          make_activation(ActivationKind::hermite, 2.0), make_activation(ActivationKind::hermite, 6.0)}) {
    const auto d = dual_of(act);
    double worst = 0.0;
    for (double rho : grid401()) worst = std::max(worst, std::abs(d.series(rho) - *d.closed(rho)));
    EXPECT_LE(worst, 1e-5) << act.token();
  }
}

TEST(Dual, ReluAndStepTruncationTailsAtDegree50) {
  // The gap between series and closed form is largest at rho = 1, where it
  // equals the analytic tail mass beyond degree 50.
  double relu_tail = 1.0, step_tail = 1.0;
  for (int i = 0; i <= 50; ++i) {
    relu_tail -= relu_b(i);
    step_tail -= step_b(i);
  }
  const auto r = dual_of(make_activation(ActivationKind::relu));
  const auto s = dual_of(make_activation(ActivationKind::step));
  EXPECT_NEAR(1.0 - r.series(1.0), relu_tail, 1e-12);
  EXPECT_NEAR(1.0 - s.series(1.0), step_tail, 1e-12);
  EXPECT_NEAR(relu_tail, 2.373e-4, 1e-6);
  EXPECT_NEAR(step_tail, 3.598e-2, 1e-5);
  EXPECT_NEAR(hermite_expand(make_activation(ActivationKind::relu)).tail_mass, relu_tail, 1e-12);
}

TEST(Dual, ValueAtZeroIsSquaredMean) {
  for (const auto& act : {make_activation(ActivationKind::relu), make_activation(ActivationKind::step),
                          make_activation(ActivationKind::exponential, 1.0)}) {
    const auto e = hermite_expand(act);
    EXPECT_NEAR(dual_eval(dual_from_expansion(e), 0.0), e.coefficients[0] * e.coefficients[0], 1e-8);
  }
}

TEST(Dual, MonotoneConvexOnUnitInterval) {
  for (const auto& act : {make_activation(ActivationKind::relu), make_activation(ActivationKind::step),
                          make_activation(ActivationKind::sine, 1.0), make_activation(ActivationKind::exponential, 1.0)}) {
    const auto d = dual_of(act);
    std::vector<double> v;
    for (int k = 0; k <= 200; ++k) v.push_back(d(k / 200.0));
    for (std::size_t k = 1; k < v.size(); ++k) EXPECT_GE(v[k] - v[k - 1], -1e-8);
    for (std::size_t k = 2; k < v.size(); ++k) EXPECT_GE(v[k] - 2 * v[k - 1] + v[k - 2], -1e-8);
    EXPECT_NEAR(d(1.0), 1.0, 1e-12);
  }
}

TEST(Dual, DerivativeCommutesWithDifferentiation) {
  const auto relu = dual_of(make_activation(ActivationKind::relu));
  const auto step = dual_of(make_activation(ActivationKind::step));
  const auto dr = dual_derivative(relu);
  EXPECT_NEAR(dr(0.0), 0.5, 1e-15);
  // (sqrt2 [x]_+)' is the normalized step, so the relation holds with factor 1.
  for (int i = 0; i <= 10; ++i) EXPECT_NEAR(dr.coefficients()[i], step.coefficients()[i], 1e-12) << i;

  const auto di = dual_derivative(dual_of(make_activation(ActivationKind::identity)));
  for (double rho : {-0.5, 0.3}) EXPECT_NEAR(di(rho), 1.0, 1e-12);
  const auto dh = dual_derivative(dual_of(make_activation(ActivationKind::hermite, 2.0)));
  for (double rho : {-0.5, 0.3}) EXPECT_NEAR(dh(rho), 2 * rho, 1e-12);
}

TEST(Dual, ExtendedRelu) {
  EXPECT_NEAR(dual_extended_relu(Eigen::Matrix2d::Identity()), 1 / M_PI, 1e-15);
  Eigen::Matrix2d ones;
  ones << 1, 1, 1, 1;
  EXPECT_NEAR(dual_extended_relu(ones), 1.0, 1e-15);
  EXPECT_NEAR(dual_extended_relu(4 * Eigen::Matrix2d::Identity()), 4 / M_PI, 1e-14);

  // Oracle: E[s(X) s(Y)] with (X, Y) ~ N(0, S), by scaling unit-variance correlated samples.
  Eigen::Matrix2d s;
  s << 2.0, 0.6, 0.6, 0.5;
  const double rho = 0.6 / std::sqrt(2.0 * 0.5);
  const double quad = std::sqrt(2.0 * 0.5) * relu_oracle(rho);
  EXPECT_NEAR(dual_extended_relu(s), quad, 1e-10);

  Eigen::Matrix2d bad;
  bad << 1, 2, 2, 1;
  EXPECT_THROW(dual_extended_relu(bad), InvalidArgument);
  bad << 0, 0, 0, 1;
  EXPECT_THROW(dual_extended_relu(bad), InvalidArgument);
  bad << 1, 0.2, 0.3, 1;
  EXPECT_THROW(dual_extended_relu(bad), InvalidArgument);
}

TEST(Dual, ValidationAndClamping) {
  EXPECT_THROW(DualActivation({0.5, -0.1}, 1.0), InvalidArgument);
  EXPECT_DOUBLE_EQ(clamp_correlation(1.0 + 1e-13), 1.0);
  EXPECT_DOUBLE_EQ(clamp_correlation(-1.0 - 1e-13), -1.0);
  EXPECT_THROW(clamp_correlation(1.0 + 1e-6), InvalidArgument);
  const auto d = dual_of(make_activation(ActivationKind::relu));
  EXPECT_THROW(d(1.5), InvalidArgument);
}

TEST(Dual, ExpansionInvariantsAndLimits) {
  const auto e = hermite_expand(make_activation(ActivationKind::exponential, 1.5));
  double sq = 0.0;
  for (double a : e.coefficients) sq += a * a;
  EXPECT_LE(sq, e.norm_squared + 1e-8);
  EXPECT_GE(e.tail_mass, -1e-8);

  ExpansionOptions tiny;
  tiny.degree = 0;
  EXPECT_THROW(hermite_expand(make_activation(ActivationKind::relu), tiny), NumericalError);
  ExpansionOptions few_points;
  few_points.degree = 50;
  few_points.quad_points = 100;
  EXPECT_THROW(hermite_expand(make_activation(ActivationKind::relu), few_points), InvalidArgument);
}
