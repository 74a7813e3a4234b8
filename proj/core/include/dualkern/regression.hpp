#pragma once

#include <Eigen/Core>
#include <span>

#include "dualkern/encoding.hpp"
#include "dualkern/network.hpp"

namespace dualkern {

/// Minimizer of (1/m) sum (f(x_i) - y_i)^2 + lambda ||f||^2 in the RKHS of a Gram matrix.
struct KernelRegressionResult {
  /// f = sum alpha_i kappa(x_i, .)
  Eigen::VectorXd alpha;
  /// Gamma alpha.
  Eigen::VectorXd fitted;
};

/// Solves (Gamma + lambda m I) alpha = y. Throws NumericalError when the
/// relative residual exceeds 1e-8 (numerically singular system).
KernelRegressionResult kernel_regression(const Eigen::MatrixXd& gram, const Eigen::VectorXd& y, double lambda);

/// Same objective with the hinge loss max(0, 1 - y f), labels in {-1, +1}.
/// Stochastic dual coordinate ascent in a fixed cyclic order (deterministic);
/// stops when the duality gap drops below `tol` or after `max_epochs`.
KernelRegressionResult kernel_svm(const Eigen::MatrixXd& gram, const Eigen::VectorXd& y, double lambda,
                                  double tol = 1e-8, int max_epochs = 5000);

/// Linear model over a representation: f(x) = <v, Psi(x)>.
struct LinearModel {
  Eigen::VectorXd v;
  Eigen::VectorXd fitted;
};

enum class RidgeSolver {
  /// Primal when q <= m, dual otherwise.
  automatic,
  /// (Psi Psi^T + lambda m I) v = Psi y.
  primal,
  /// v = Psi alpha with (Psi^T Psi + lambda m I) alpha = y.
  dual,
};

/// Ridge regression over the columns of psi (q x m).
LinearModel last_layer_train(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y, double lambda,
                             RidgeSolver solver = RidgeSolver::automatic);
LinearModel last_layer_train(const Network& net, const WeightAssignment& w, std::span<const InputPoint> points,
                             const Eigen::VectorXd& y, double lambda, RidgeSolver solver = RidgeSolver::automatic);

double squared_loss(const Eigen::VectorXd& predictions, const Eigen::VectorXd& y);
double hinge_loss(const Eigen::VectorXd& predictions, const Eigen::VectorXd& y);

}  // namespace dualkern
