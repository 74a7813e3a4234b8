#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dualkern/quadrature.hpp"

namespace dualkern {

enum class ActivationKind { identity, relu, step, exponential, sine, hermite, custom };

std::string_view to_string(ActivationKind kind);
/// Accepts the catalog names: identity, relu, step, exp, sin, hermite, custom.
ActivationKind parse_activation_kind(std::string_view name);

/// A scalar nonlinearity from the catalog, possibly rescaled to unit Gaussian norm.
///
/// Raw members are x, max(0,x), 1[x>=0], e^{ax}, sin(ax), h_n(x) and
/// sum_i c_i h_i(x). The normalized member multiplies the raw function by
/// 1/||sigma||, so that E[sigma(X)^2] = 1 for X ~ N(0,1).
class Activation {
 public:
  static Activation identity();
  static Activation relu();
  static Activation step();
  static Activation exponential(double a);
  static Activation sine(double a);
  static Activation hermite(int n);
  /// Custom activation given by its Hermite coefficients. Normalized on construction.
  static Activation custom(std::vector<double> hermite_coefficients);

  /// Raw (unnormalized) catalog member.
  static Activation raw(ActivationKind kind, std::optional<double> param = std::nullopt);

  ActivationKind kind() const noexcept { return kind_; }
  /// a for exponential/sine, n for hermite, 0 otherwise.
  double param() const noexcept { return param_; }
  /// ||sigma|| of this (possibly rescaled) function.
  double gaussian_norm() const noexcept { return scale_ * raw_norm_; }
  bool normalized() const noexcept { return normalized_; }
  /// Multiplier applied to the raw catalog function.
  double scale() const noexcept { return scale_; }
  /// Hermite coefficients of a custom activation, already scaled.
  const std::vector<double>& custom_coefficients() const noexcept { return custom_; }

  double operator()(double x) const;

  /// Pointwise function with the kink (if any) exposed for quadrature.
  PiecewiseFunction as_piecewise() const;

  /// Returns the rescaled copy with unit Gaussian norm.
  Activation normalize() const;

  /// True when sigma(c x) = c sigma(x) for c > 0 (identity, relu).
  bool positively_homogeneous() const noexcept;

  /// DSL token, e.g. "relu", "exp(a=1.5)", "hermite(n=2)".
  std::string token() const;

  friend bool operator==(const Activation&, const Activation&) = default;

 private:
  Activation(ActivationKind kind, double param, double raw_norm, std::vector<double> custom = {});

  ActivationKind kind_;
  double param_ = 0.0;
  double raw_norm_ = 1.0;
  double scale_ = 1.0;
  bool normalized_ = false;
  std::vector<double> custom_;
};

/// make_activation: the normalized catalog member. `param` is required for
/// exponential (a), sine (a != 0) and hermite (integer n >= 0).
Activation make_activation(ActivationKind kind, std::optional<double> param = std::nullopt);

/// Custom activation from the Hermite expansion of erf(x) truncated at
/// `degree` (odd terms only), normalized. A bounded-activation stand-in.
Activation erf_truncated(int degree);

/// ||sigma|| = sqrt(E sigma(X)^2) by Gauss-Hermite quadrature on quad_points nodes.
/// Throws NumericalError on non-finite values at the nodes.
double gaussian_norm(const PiecewiseFunction& sigma, int quad_points = 200);
double gaussian_norm(const std::function<double(double)>& sigma, int quad_points = 200);

}  // namespace dualkern
