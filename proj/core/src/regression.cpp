#include "dualkern/regression.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "dualkern/error.hpp"

namespace dualkern {
namespace {

void check_problem(const Eigen::MatrixXd& gram, const Eigen::VectorXd& y, double lambda) {
  if (gram.rows() != gram.cols()) throw ShapeError("Gram matrix must be square");
  if (gram.rows() != y.size()) throw ShapeError("label count does not match the Gram matrix");
  if (gram.rows() == 0) throw InvalidArgument("empty regression problem");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be positive");
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw NumericalError("ridge system factorization failed");
  Eigen::VectorXd x = ldlt.solve(b);
  const double scale = std::max(b.norm(), 1e-300);
  const double residual = (a * x - b).norm() / scale;
  if (!std::isfinite(residual) || residual > 1e-8) {
    throw NumericalError("ridge system is numerically singular (relative residual " + std::to_string(residual) + ")");
  }
  return x;
}

}  // namespace

KernelRegressionResult kernel_regression(const Eigen::MatrixXd& gram, const Eigen::VectorXd& y, double lambda) {
  check_problem(gram, y, lambda);
  const auto m = gram.rows();
  Eigen::MatrixXd a = gram;
  a.diagonal().array() += lambda * double(m);
  KernelRegressionResult out;
  out.alpha = solve_spd(a, y);
  out.fitted = gram * out.alpha;
  return out;
}

KernelRegressionResult kernel_svm(const Eigen::MatrixXd& gram, const Eigen::VectorXd& y, double lambda, double tol,
                                  int max_epochs) {
  check_problem(gram, y, lambda);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 1.0 && y[i] != -1.0) throw InvalidArgument("hinge loss needs labels in {-1, +1}");
  }
  // Objective (1/m) sum hinge + (lam2 / 2) ||f||^2 with lam2 = 2 lambda.
  // Dual variables a_i = y_i * beta_i with beta_i in [0, 1]; f = K a / (lam2 m).
  const auto m = gram.rows();
  const double lm = 2.0 * lambda * double(m);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(m);
  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double kii = gram(i, i);
      if (kii <= 0.0) continue;
      const double beta = a[i] * y[i];
      const double proposed = std::clamp(beta + (1.0 - y[i] * f[i]) * lm / kii, 0.0, 1.0);
      const double delta = (proposed - beta) * y[i];
      if (delta != 0.0) {
        a[i] += delta;
        f += gram.col(i) * (delta / lm);
      }
    }
    // Duality gap: primal - dual.
    const double reg = 0.5 * f.dot(a) / double(m);  // (lam2/2)||f||^2 = a^T K a / (2 lam2 m^2)
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) hinge += std::max(0.0, 1.0 - y[i] * f[i]);
    const double primal = hinge / double(m) + reg;
    const double dual = (a.array() * y.array()).sum() / double(m) - reg;
    if (primal - dual < tol) break;
  }
  KernelRegressionResult out;
  out.alpha = a / lm;
  out.fitted = f;
  return out;
}

LinearModel last_layer_train(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y, double lambda, RidgeSolver solver) {
  if (psi.cols() != y.size()) throw ShapeError("label count does not match the representation");
  if (psi.cols() == 0) throw InvalidArgument("empty regression problem");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be positive");
  const double lm = lambda * double(psi.cols());
  if (solver == RidgeSolver::automatic) solver = psi.rows() <= psi.cols() ? RidgeSolver::primal : RidgeSolver::dual;

  LinearModel out;
  if (solver == RidgeSolver::primal) {
    Eigen::MatrixXd a = psi * psi.transpose();
    a.diagonal().array() += lm;
    out.v = solve_spd(a, psi * y);
  } else {
    Eigen::MatrixXd a = psi.transpose() * psi;
    a.diagonal().array() += lm;
    out.v = psi * solve_spd(a, y);
  }
  out.fitted = psi.transpose() * out.v;
  return out;
}

LinearModel last_layer_train(const Network& net, const WeightAssignment& w, std::span<const InputPoint> points,
                             const Eigen::VectorXd& y, double lambda, RidgeSolver solver) {
  return last_layer_train(representation(net, w, points), y, lambda, solver);
}

double squared_loss(const Eigen::VectorXd& predictions, const Eigen::VectorXd& y) {
  if (predictions.size() != y.size() || y.size() == 0) throw ShapeError("loss: size mismatch");
  return (predictions - y).squaredNorm() / double(y.size());
}

double hinge_loss(const Eigen::VectorXd& predictions, const Eigen::VectorXd& y) {
  if (predictions.size() != y.size() || y.size() == 0) throw ShapeError("loss: size mismatch");
  return (1.0 - (predictions.array() * y.array())).max(0.0).mean();
}

}  // namespace dualkern
