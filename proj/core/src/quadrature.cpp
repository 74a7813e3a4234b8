#include "dualkern/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "dualkern/error.hpp"

namespace dualkern {
namespace {

// Eigenvalues of the Jacobi matrix give starting points; Newton on the
// three-term recurrence then recovers full relative accuracy, which the
// eigenvector-based weights lack in the far tails.
std::vector<double> jacobi_eigenvalues(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("quadrature: Jacobi eigenvalue solve failed");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

struct PolyPair {
  double value;
  double previous;
};

PolyPair hermite_pair(int n, double x) {
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = (x * cur - std::sqrt(double(k)) * prev) / std::sqrt(double(k + 1));
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

PolyPair laguerre_pair(int n, double t) {
  double prev = 1.0;
  double cur = 1.0 - t;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - t) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

std::unique_ptr<QuadratureRule> build_gauss_hermite(int n) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(double(k));
  auto rule = std::make_unique<QuadratureRule>();
  rule->nodes = jacobi_eigenvalues(diag, sub);
  rule->weights.resize(n);
  if (n == 1) {
    rule->nodes[0] = 0.0;
    rule->weights[0] = 1.0;
    return rule;
  }
  const double sqrt_n = std::sqrt(double(n));
  for (int i = 0; i < n; ++i) {
    double x = rule->nodes[i];
    for (int iter = 0; iter < 100; ++iter) {
      const auto [h, hprev] = hermite_pair(n, x);
      const double dx = h / (sqrt_n * hprev);
      x -= dx;
      if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    const double hprev = hermite_pair(n, x).previous;
    rule->nodes[i] = x;
    rule->weights[i] = 1.0 / (double(n) * hprev * hprev);
  }
  // Symmetrize so that odd moments vanish to rounding.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule->nodes[j] - rule->nodes[i]);
    const double w = 0.5 * (rule->weights[i] + rule->weights[j]);
    rule->nodes[i] = -x;
    rule->nodes[j] = x;
    rule->weights[i] = rule->weights[j] = w;
  }
  if (n % 2 == 1) rule->nodes[n / 2] = 0.0;
  return rule;
}

std::unique_ptr<QuadratureRule> build_gauss_laguerre(int n) {
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) sub[k - 1] = double(k);
  auto rule = std::make_unique<QuadratureRule>();
  rule->nodes = jacobi_eigenvalues(diag, sub);
  rule->weights.resize(n);
  const double nn = double(n);
  for (int i = 0; i < n; ++i) {
    double t = rule->nodes[i];
    for (int iter = 0; iter < 100; ++iter) {
      const auto [l, lprev] = laguerre_pair(n, t);
      const double dl = nn * (l - lprev) / t;
      const double dt = l / dl;
      t -= dt;
      if (std::abs(dt) <= 1e-16 * t) break;
    }
    // Christoffel function 1 / sum_k L_k(t)^2 (L_k orthonormal for e^{-t}).
    double p0 = 1.0, p1 = 1.0 - t, sum = 1.0 + p1 * p1;
    for (int k = 1; k + 1 < n; ++k) {
      const double p2 = ((2.0 * k + 1.0 - t) * p1 - k * p0) / (k + 1.0);
      p0 = p1;
      p1 = p2;
      sum += p1 * p1;
    }
    rule->nodes[i] = t;
    rule->weights[i] = 1.0 / sum;
  }
  return rule;
}

template <class Builder>
const QuadratureRule& cached_rule(std::map<int, std::unique_ptr<QuadratureRule>>& cache,
                                  std::mutex& mutex, int n, Builder build) {
  if (n < 1) throw InvalidArgument("quadrature: rule size must be positive");
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build(n)).first;
  return *it->second;
}

}  // namespace

const QuadratureRule& gauss_hermite(int n) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mutex;
  return cached_rule(cache, mutex, n, build_gauss_hermite);
}

const QuadratureRule& gauss_laguerre(int n) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mutex;
  return cached_rule(cache, mutex, n, build_gauss_laguerre);
}

GaussianIntegrator::GaussianIntegrator(int hermite_points)
    : hermite_points_(hermite_points),
      gh_(&gauss_hermite(hermite_points)),
      gl_(&gauss_laguerre(std::max(32, hermite_points / 2))) {}

double GaussianIntegrator::expectation(const PiecewiseFunction& f) const {
  const auto one = [](double, std::span<double> out) { out[0] = 1.0; };
  return moments(f, 1, one)[0];
}

std::vector<double> GaussianIntegrator::moments(
    const PiecewiseFunction& f, std::size_t count,
    const std::function<void(double, std::span<double>)>& basis) const {
  std::vector<double> result(count, 0.0);
  std::vector<double> gp(count);
  std::vector<double> gm(count);

  const auto check = [](double v) {
    if (!std::isfinite(v)) throw NumericalError("quadrature: non-finite integrand at a node");
    return v;
  };

  if (!f.has_kink()) {
    for (std::size_t i = 0; i < gh_->size(); ++i) {
      const double x = gh_->nodes[i];
      const double fx = check(f.right(x)) * gh_->weights[i];
      basis(x, gp);
      for (std::size_t k = 0; k < count; ++k) result[k] += fx * gp[k];
    }
    return result;
  }

  const auto& right = f.right;
  const auto& left = *f.left;

  // Symmetric part: (E[R g] + E[L g]) / 2 over the full line.
  for (std::size_t i = 0; i < gh_->size(); ++i) {
    const double x = gh_->nodes[i];
    const double fx = 0.5 * (check(right(x)) + check(left(x))) * gh_->weights[i];
    basis(x, gp);
    for (std::size_t k = 0; k < count; ++k) result[k] += fx * gp[k];
  }

  // Odd part on the half line: int_0^inf D(x) phi(x) dx with
  // D = (R g)_odd - (L g)_odd, via x = sqrt(2t).
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < gl_->size(); ++i) {
    const double t = gl_->nodes[i];
    const double x = std::sqrt(2.0 * t);
    const double rp = check(right(x));
    const double rm = check(right(-x));
    const double lp = check(left(x));
    const double lm = check(left(-x));
    basis(x, gp);
    basis(-x, gm);
    const double scale = gl_->weights[i] * inv_sqrt_2pi / x * 0.5;
    for (std::size_t k = 0; k < count; ++k) {
      const double d = (rp - lp) * gp[k] - (rm - lm) * gm[k];
      result[k] += scale * d;
    }
  }
  return result;
}

}  // namespace dualkern
