#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace dualkern {

/// Nodes and weights of a Gaussian quadrature rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss-Hermite rule for the standard normal density e^{-x^2/2}/sqrt(2 pi).
/// Weights sum to one. Exact for polynomials of degree < 2n.
/// Rules are cached per size; the returned reference stays valid.
const QuadratureRule& gauss_hermite(int n);

/// Gauss-Laguerre rule for the weight e^{-t} on [0, inf).
const QuadratureRule& gauss_laguerre(int n);

/// Real function that is entire on each side of a single breakpoint at 0.
/// With `left` unset the function is `right` everywhere.
/// At x = 0 the right branch applies.
struct PiecewiseFunction {
  std::function<double(double)> right;
  std::optional<std::function<double(double)>> left;

  double operator()(double x) const {
    return (left && x < 0.0) ? (*left)(x) : right(x);
  }
  bool has_kink() const noexcept { return left.has_value(); }
};

/// Integration of E[f(X) g_k(X)] for X ~ N(0,1) over a family g_0..g_K
/// that is entire (e.g. Hermite polynomials). A kinked f is split at 0:
///   int_0^inf u phi = E[u]/2 + int_0^inf u_odd phi,
/// and the odd half-line part is mapped by t = x^2/2 onto a Gauss-Laguerre
/// rule, where it becomes a smooth integrand.
class GaussianIntegrator {
 public:
  explicit GaussianIntegrator(int hermite_points);

  /// E[f(X)].
  double expectation(const PiecewiseFunction& f) const;

  /// Returns E[f(X) basis_k(X)] for k = 0 .. count-1, where
  /// basis(x, out) writes the family at x into out (size count).
  std::vector<double> moments(
      const PiecewiseFunction& f, std::size_t count,
      const std::function<void(double, std::span<double>)>& basis) const;

  int hermite_points() const noexcept { return hermite_points_; }

 private:
  int hermite_points_;
  const QuadratureRule* gh_;
  const QuadratureRule* gl_;
};

}  // namespace dualkern
