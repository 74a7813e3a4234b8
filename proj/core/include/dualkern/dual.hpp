#pragma once

#include <Eigen/Core>
#include <optional>
#include <string_view>
#include <vector>

#include "dualkern/activation.hpp"

namespace dualkern {

/// Hermite coefficients a_0..a_N of an activation: sigma = sum_i a_i h_i.
struct HermiteExpansion {
  std::vector<double> coefficients;
  /// ||sigma||^2 - sum a_i^2: the mass beyond the truncation degree.
  double tail_mass = 0.0;
  double norm_squared = 1.0;
  /// Source activation, used to attach a closed-form dual.
  std::optional<Activation> source;

  int degree() const noexcept { return int(coefficients.size()) - 1; }
};

struct ExpansionOptions {
  int degree = 50;
  /// 0 picks max(200, 2*degree + 32).
  int quad_points = 0;
  /// hermite_expand throws NumericalError when the tail exceeds this.
  double max_tail_mass = 0.1;
};

/// a_i = E[sigma(X) h_i(X)] by quadrature, i = 0..N.
/// Requires quad_points >= 2N + 32.
HermiteExpansion hermite_expand(const Activation& sigma, const ExpansionOptions& options = {});

enum class ClosedForm { identity, square, arccos1, arccos0, rbf_exp, sinh, power_n };

std::string_view to_string(ClosedForm form);

/// sigma_hat(rho) = sum_i b_i rho^i with b_i >= 0, plus an optional
/// analytic form that takes precedence at evaluation time.
class DualActivation {
 public:
  DualActivation(std::vector<double> coefficients, double source_norm,
                 std::optional<ClosedForm> closed_form = std::nullopt, double closed_param = 0.0);

  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  std::optional<ClosedForm> closed_form() const noexcept { return closed_form_; }
  /// a for rbf_exp / sinh, n for power_n.
  double closed_param() const noexcept { return closed_param_; }
  /// ||sigma||^2 of the activation this dual came from.
  double source_norm() const noexcept { return source_norm_; }

  /// dual_eval: closed form when present, else the truncated series.
  /// rho must lie in [-1, 1]; overshoot up to 1e-12 is clamped.
  double operator()(double rho) const;
  double series(double rho) const;
  std::optional<double> closed(double rho) const;

  /// Term-by-term derivative: coefficients (i+1) b_{i+1}. No closed form.
  DualActivation derivative() const;

 private:
  std::vector<double> coefficients_;
  double source_norm_;
  std::optional<ClosedForm> closed_form_;
  double closed_param_;
};

/// b_i = a_i^2, with the closed form attached for recognized catalog members.
DualActivation dual_from_expansion(const HermiteExpansion& expansion);

/// Convenience: dual_from_expansion(hermite_expand(sigma, options)).
DualActivation dual_of(const Activation& sigma, const ExpansionOptions& options = {});

double dual_eval(const DualActivation& dual, double rho);
DualActivation dual_derivative(const DualActivation& dual);

/// Closed-form dual of the normalized ReLU, (sqrt(1-rho^2) + (pi - acos rho) rho) / pi.
double relu_dual(double rho);
/// Closed-form dual of the normalized step, 1 - acos(rho) / pi.
double step_dual(double rho);

/// Extended ReLU dual on a 2x2 covariance:
/// sqrt(S11 S22) * relu_dual(S12 / sqrt(S11 S22)) = E[s(X) s(Y)], (X,Y) ~ N(0, S).
/// Throws InvalidArgument when S is not symmetric PSD with positive diagonal.
double dual_extended_relu(const Eigen::Matrix2d& covariance);

/// Clamps rho into [-1, 1] when it overshoots by at most `slack`, else throws.
double clamp_correlation(double rho, double slack = 1e-12);

}  // namespace dualkern
