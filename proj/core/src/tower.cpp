#include "dualkern/tower.hpp"

#include <cmath>

#include "dualkern/error.hpp"

namespace dualkern {

namespace {
void check_open_interval(double rho) {
  if (!(rho > -1.0 && rho < 1.0)) throw InvalidArgument("tower: rho must lie in (-1, 1)");
}
}  // namespace

double tower_iterate(const DualActivation& dual, double rho, int m) {
  check_open_interval(rho);
  if (m < 0) throw InvalidArgument("tower_iterate: m must be >= 0");
  for (int i = 0; i < m; ++i) rho = dual(rho);
  return rho;
}

TowerResult tower_fixed_point(const DualActivation& dual, double tol, int max_iter, double start) {
  check_open_interval(start);
  if (!(tol > 0.0)) throw InvalidArgument("tower_fixed_point: tol must be positive");
  if (max_iter < 1) throw InvalidArgument("tower_fixed_point: max_iter must be >= 1");
  TowerResult result;
  result.trace.push_back(start);
  double current = start;
  for (int m = 1; m <= max_iter; ++m) {
    const double next = dual(current);
    result.trace.push_back(next);
    result.iterations = m;
    const bool done = std::abs(next - current) < tol;
    current = next;
    if (done) {
      result.converged = true;
      break;
    }
  }
  result.value = current;
  return result;
}

}  // namespace dualkern
