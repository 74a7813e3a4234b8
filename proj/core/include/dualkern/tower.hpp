#pragma once

#include <vector>

#include "dualkern/dual.hpp"

namespace dualkern {

/// alpha_m(rho): the m-fold composition of the dual with itself.
/// rho must lie in the open interval (-1, 1).
double tower_iterate(const DualActivation& dual, double rho, int m);

struct TowerResult {
  /// Last iterate; the fixed point alpha_sigma when converged.
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  /// alpha_0 = start, alpha_1, ..., alpha_iterations.
  std::vector<double> trace;
};

/// Iterates from `start` until |alpha_{m+1} - alpha_m| < tol or m = max_iter.
/// Non-convergence is reported through `converged`, with the last iterate kept.
///
/// The ReLU dual has a neutral fixed point at 1 (its slope there is 1), so
/// iterates approach 1 only like 1/m^2 and tol must be far below the
/// desired distance to 1.
TowerResult tower_fixed_point(const DualActivation& dual, double tol, int max_iter, double start = 0.5);

}  // namespace dualkern
