#include "dualkern/activation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dualkern/csv.hpp"
#include "dualkern/error.hpp"
#include "dualkern/hermite.hpp"

namespace dualkern {

std::string_view to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::identity: return "identity";
    case ActivationKind::relu: return "relu";
    case ActivationKind::step: return "step";
    case ActivationKind::exponential: return "exp";
    case ActivationKind::sine: return "sin";
    case ActivationKind::hermite: return "hermite";
    case ActivationKind::custom: return "custom";
  }
  return "unknown";
}

ActivationKind parse_activation_kind(std::string_view name) {
  if (name == "identity") return ActivationKind::identity;
  if (name == "relu") return ActivationKind::relu;
  if (name == "step") return ActivationKind::step;
  if (name == "exp" || name == "exponential") return ActivationKind::exponential;
  if (name == "sin" || name == "sine") return ActivationKind::sine;
  if (name == "hermite") return ActivationKind::hermite;
  if (name == "custom") return ActivationKind::custom;
  throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

Activation::Activation(ActivationKind kind, double param, double raw_norm, std::vector<double> custom)
    : kind_(kind), param_(param), raw_norm_(raw_norm), custom_(std::move(custom)) {}

Activation Activation::identity() { return make_activation(ActivationKind::identity); }
Activation Activation::relu() { return make_activation(ActivationKind::relu); }
Activation Activation::step() { return make_activation(ActivationKind::step); }
Activation Activation::exponential(double a) { return make_activation(ActivationKind::exponential, a); }
Activation Activation::sine(double a) { return make_activation(ActivationKind::sine, a); }
Activation Activation::hermite(int n) { return make_activation(ActivationKind::hermite, double(n)); }

Activation Activation::custom(std::vector<double> hermite_coefficients) {
  if (hermite_coefficients.empty()) throw InvalidArgument("custom activation: no coefficients");
  double sq = 0.0;
  for (double c : hermite_coefficients) {
    if (!std::isfinite(c)) throw InvalidArgument("custom activation: non-finite coefficient");
    sq += c * c;
  }
  if (sq <= 0.0) throw InvalidArgument("custom activation: all coefficients are zero");
  const double norm = std::sqrt(sq);
  for (double& c : hermite_coefficients) c /= norm;
  Activation act(ActivationKind::custom, 0.0, 1.0, std::move(hermite_coefficients));
  act.normalized_ = true;
  return act;
}

Activation Activation::raw(ActivationKind kind, std::optional<double> param) {
  const auto need_param = [&](const char* what) {
    if (!param) throw InvalidArgument(std::string(what) + " activation requires a parameter");
    if (!std::isfinite(*param)) throw InvalidArgument(std::string(what) + ": parameter must be finite");
    return *param;
  };
  switch (kind) {
    case ActivationKind::identity: return {kind, 0.0, 1.0};
    case ActivationKind::relu: return {kind, 0.0, std::sqrt(0.5)};
    case ActivationKind::step: return {kind, 0.0, std::sqrt(0.5)};
    case ActivationKind::exponential: {
      const double a = need_param("exp");
      // E[e^{2aX}] = e^{2a^2}
      return {kind, a, std::exp(a * a)};
    }
    case ActivationKind::sine: {
      const double a = need_param("sin");
      if (a == 0.0) throw InvalidArgument("sin activation: a must be nonzero");
      // E[sin^2(aX)] = (1 - e^{-2a^2}) / 2
      return {kind, a, std::sqrt(-0.5 * std::expm1(-2.0 * a * a))};
    }
    case ActivationKind::hermite: {
      const double n = need_param("hermite");
      if (n < 0.0 || n != std::floor(n) || n > 1000.0) {
        throw InvalidArgument("hermite activation: n must be a nonnegative integer");
      }
      return {kind, n, 1.0};
    }
    case ActivationKind::custom:
      throw InvalidArgument("custom activations are built from Hermite coefficients");
  }
  throw InvalidArgument("unknown activation kind");
}

Activation Activation::normalize() const {
  Activation out = *this;
  out.scale_ = 1.0 / raw_norm_;
  out.normalized_ = true;
  return out;
}

Activation make_activation(ActivationKind kind, std::optional<double> param) {
  return Activation::raw(kind, param).normalize();
}

double Activation::operator()(double x) const {
  switch (kind_) {
    case ActivationKind::identity: return scale_ * x;
    case ActivationKind::relu: return x > 0.0 ? scale_ * x : 0.0;
    case ActivationKind::step: return x >= 0.0 ? scale_ : 0.0;
    case ActivationKind::exponential: return scale_ * std::exp(param_ * x);
    case ActivationKind::sine: return scale_ * std::sin(param_ * x);
    case ActivationKind::hermite: return scale_ * dualkern::hermite(int(param_), x);
    case ActivationKind::custom: return scale_ * hermite_series(custom_, x);
  }
  return 0.0;
}

PiecewiseFunction Activation::as_piecewise() const {
  const double s = scale_;
  switch (kind_) {
    case ActivationKind::relu:
      return {[s](double x) { return s * x; }, [](double) { return 0.0; }};
    case ActivationKind::step:
      return {[s](double) { return s; }, [](double) { return 0.0; }};
    default: {
      Activation copy = *this;
      return {[copy](double x) { return copy(x); }, std::nullopt};
    }
  }
}

bool Activation::positively_homogeneous() const noexcept {
  return kind_ == ActivationKind::identity || kind_ == ActivationKind::relu ||
         (kind_ == ActivationKind::hermite && param_ == 1.0);
}

std::string Activation::token() const {
  switch (kind_) {
    case ActivationKind::exponential: return "exp(a=" + format_double(param_) + ")";
    case ActivationKind::sine: return "sin(a=" + format_double(param_) + ")";
    case ActivationKind::hermite: return "hermite(n=" + std::to_string(int(param_)) + ")";
    default: return std::string(to_string(kind_));
  }
}

double gaussian_norm(const PiecewiseFunction& sigma, int quad_points) {
  if (quad_points < 32) throw InvalidArgument("gaussian_norm: need at least 32 quadrature points");
  const GaussianIntegrator integrator(quad_points);
  PiecewiseFunction squared;
  squared.right = [&sigma](double x) {
    const double v = sigma.right(x);
    return v * v;
  };
  if (sigma.left) {
    squared.left = [&sigma](double x) {
      const double v = (*sigma.left)(x);
      return v * v;
    };
  }
  const double second_moment = integrator.expectation(squared);
  if (!std::isfinite(second_moment)) throw NumericalError("gaussian_norm: non-finite result");
  return std::sqrt(std::max(0.0, second_moment));
}

double gaussian_norm(const std::function<double(double)>& sigma, int quad_points) {
  return gaussian_norm(PiecewiseFunction{sigma, std::nullopt}, quad_points);
}

Activation erf_truncated(int degree) {
  if (degree < 1) throw InvalidArgument("erf_truncated: degree must be >= 1");
  const GaussianIntegrator integrator(std::max(200, 2 * degree + 32));
  const PiecewiseFunction erf{[](double x) { return std::erf(x); }, std::nullopt};
  auto coeffs = integrator.moments(erf, std::size_t(degree) + 1, [](double x, std::span<double> out) { hermite_all(x, out); });
  for (std::size_t i = 0; i < coeffs.size(); i += 2) coeffs[i] = 0.0;
  return Activation::custom(std::move(coeffs));
}

}  // namespace dualkern
