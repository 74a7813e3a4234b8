#include "dualkern/dual.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dualkern/error.hpp"
#include "dualkern/hermite.hpp"

namespace dualkern {

std::string_view to_string(ClosedForm form) {
  switch (form) {
    case ClosedForm::identity: return "identity";
    case ClosedForm::square: return "square";
    case ClosedForm::arccos1: return "arccos1";
    case ClosedForm::arccos0: return "arccos0";
    case ClosedForm::rbf_exp: return "rbf-exp";
    case ClosedForm::sinh: return "sinh";
    case ClosedForm::power_n: return "power-n";
  }
  return "unknown";
}

double clamp_correlation(double rho, double slack) {
  if (std::isnan(rho) || rho > 1.0 + slack || rho < -1.0 - slack) {
    throw InvalidArgument("correlation outside [-1, 1]: " + std::to_string(rho));
  }
  return std::clamp(rho, -1.0, 1.0);
}

double relu_dual(double rho) {
  rho = clamp_correlation(rho);
  const double pi = std::numbers::pi;
  return (std::sqrt(std::max(0.0, 1.0 - rho * rho)) + (pi - std::acos(rho)) * rho) / pi;
}

double step_dual(double rho) {
  rho = clamp_correlation(rho);
  return 1.0 - std::acos(rho) / std::numbers::pi;
}

HermiteExpansion hermite_expand(const Activation& sigma, const ExpansionOptions& options) {
  if (options.degree < 0) throw InvalidArgument("hermite_expand: degree must be >= 0");
  const int needed = 2 * options.degree + 32;
  int points = options.quad_points == 0 ? std::max(200, needed) : options.quad_points;
  if (points < needed) {
    throw InvalidArgument("hermite_expand: need at least 2N+32 = " + std::to_string(needed) +
                          " quadrature points");
  }
  const GaussianIntegrator integrator(points);
  const auto count = std::size_t(options.degree) + 1;

  HermiteExpansion out;
  out.coefficients = integrator.moments(sigma.as_piecewise(), count, hermite_all);
  out.norm_squared = sigma.gaussian_norm() * sigma.gaussian_norm();
  double captured = 0.0;
  for (double a : out.coefficients) captured += a * a;
  out.tail_mass = out.norm_squared - captured;
  out.source = sigma;

  if (out.tail_mass < -1e-8 * std::max(1.0, out.norm_squared)) {
    throw NumericalError("hermite_expand: coefficients exceed the norm; quadrature did not converge");
  }
  if (out.tail_mass > options.max_tail_mass * out.norm_squared) {
    throw NumericalError("hermite_expand: tail mass " + std::to_string(out.tail_mass) +
                         " above threshold; truncation degree too low");
  }
  return out;
}

DualActivation::DualActivation(std::vector<double> coefficients, double source_norm,
                               std::optional<ClosedForm> closed_form, double closed_param)
    : coefficients_(std::move(coefficients)),
      source_norm_(source_norm),
      closed_form_(closed_form),
      closed_param_(closed_param) {
  for (double b : coefficients_) {
    if (!(b >= 0.0)) throw InvalidArgument("dual activation: coefficients must be nonnegative");
  }
}

double DualActivation::series(double rho) const {
  rho = clamp_correlation(rho);
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * rho + *it;
  return acc;
}

std::optional<double> DualActivation::closed(double rho) const {
  if (!closed_form_) return std::nullopt;
  rho = clamp_correlation(rho);
  // Closed forms are for the unit-norm member; rescale by ||sigma||^2.
  const double a2 = closed_param_ * closed_param_;
  double unit = 0.0;
  switch (*closed_form_) {
    case ClosedForm::identity: unit = rho; break;
    case ClosedForm::square: unit = rho * rho; break;
    case ClosedForm::power_n: unit = std::pow(rho, closed_param_); break;
    case ClosedForm::arccos1: unit = relu_dual(rho); break;
    case ClosedForm::arccos0: unit = step_dual(rho); break;
    case ClosedForm::rbf_exp: unit = std::exp(a2 * (rho - 1.0)); break;
    case ClosedForm::sinh: unit = std::sinh(a2 * rho) / std::sinh(a2); break;
  }
  return source_norm_ * unit;
}

double DualActivation::operator()(double rho) const {
  if (auto value = closed(rho)) return *value;
  return series(rho);
}

DualActivation DualActivation::derivative() const {
  std::vector<double> d;
  if (coefficients_.size() > 1) {
    d.resize(coefficients_.size() - 1);
    for (std::size_t i = 1; i < coefficients_.size(); ++i) d[i - 1] = double(i) * coefficients_[i];
  } else {
    d.push_back(0.0);
  }
  double norm = 0.0;
  for (double b : d) norm += b;
  return DualActivation(std::move(d), norm);
}

DualActivation dual_from_expansion(const HermiteExpansion& expansion) {
  std::vector<double> b(expansion.coefficients.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = expansion.coefficients[i] * expansion.coefficients[i];

  std::optional<ClosedForm> form;
  double param = 0.0;
  if (expansion.source) {
    const Activation& s = *expansion.source;
    switch (s.kind()) {
      case ActivationKind::identity: form = ClosedForm::identity; break;
      case ActivationKind::relu: form = ClosedForm::arccos1; break;
      case ActivationKind::step: form = ClosedForm::arccos0; break;
      case ActivationKind::exponential:
        form = ClosedForm::rbf_exp;
        param = s.param();
        break;
      case ActivationKind::sine:
        form = ClosedForm::sinh;
        param = s.param();
        break;
      case ActivationKind::hermite:
        param = s.param();
        form = param == 1.0 ? ClosedForm::identity
               : param == 2.0 ? ClosedForm::square
                              : ClosedForm::power_n;
        break;
      case ActivationKind::custom: break;
    }
  }
  return DualActivation(std::move(b), expansion.norm_squared, form, param);
}

DualActivation dual_of(const Activation& sigma, const ExpansionOptions& options) {
  return dual_from_expansion(hermite_expand(sigma, options));
}

double dual_eval(const DualActivation& dual, double rho) { return dual(rho); }

DualActivation dual_derivative(const DualActivation& dual) { return dual.derivative(); }

double dual_extended_relu(const Eigen::Matrix2d& covariance) {
  const double s11 = covariance(0, 0);
  const double s22 = covariance(1, 1);
  const double s12 = covariance(0, 1);
  if (!covariance.allFinite()) throw InvalidArgument("dual_extended_relu: non-finite entry");
  if (s11 <= 0.0 || s22 <= 0.0) throw InvalidArgument("dual_extended_relu: diagonal must be positive");
  const double scale = std::sqrt(s11 * s22);
  if (std::abs(s12 - covariance(1, 0)) > 1e-12 * scale) {
    throw InvalidArgument("dual_extended_relu: matrix is not symmetric");
  }
  if (s11 * s22 - s12 * s12 < -1e-12 * s11 * s22) {
    throw InvalidArgument("dual_extended_relu: matrix is not positive semidefinite");
  }
  return scale * relu_dual(std::clamp(s12 / scale, -1.0, 1.0));
}

}  // namespace dualkern
