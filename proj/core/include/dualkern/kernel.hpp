#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dualkern/dual.hpp"
#include "dualkern/encoding.hpp"
#include "dualkern/skeleton.hpp"

namespace dualkern {

/// kappa_S (and kappa_S^beta) for one skeleton. Dual activations are computed
/// once per internal node at construction; evaluation visits each node once.
class CompositionalKernel {
 public:
  explicit CompositionalKernel(Skeleton skeleton, const ExpansionOptions& options = {});

  /// kappa at the output node. Throws ShapeError on (n, d) mismatch.
  double operator()(const InputPoint& x, const InputPoint& y) const;

  /// kappa_v for every node v (indexed by node id).
  std::vector<double> node_values(const InputPoint& x, const InputPoint& y) const;

  const Skeleton& skeleton() const noexcept { return skeleton_; }
  const DualActivation& dual(NodeId v) const;

  void check_conformant(const InputPoint& x) const;

 private:
  Skeleton skeleton_;
  std::vector<std::optional<DualActivation>> duals_;
};

double kernel_eval(const Skeleton& skeleton, const InputPoint& x, const InputPoint& y);

struct GramMatrix {
  Eigen::MatrixXd values;
  std::string skeleton_hash;

  Eigen::Index size() const noexcept { return values.rows(); }
  double min_eigenvalue() const;
};

/// Gamma_ij = kappa(x_i, x_j); upper triangle computed once and mirrored.
/// Rows are split across `threads` workers; the result does not depend on it.
GramMatrix gram(const CompositionalKernel& kernel, std::span<const InputPoint> points, unsigned threads = 1);
GramMatrix gram(const Skeleton& skeleton, std::span<const InputPoint> points, unsigned threads = 1);

/// K_ij = kappa(rows_i, cols_j).
Eigen::MatrixXd cross_gram(const CompositionalKernel& kernel, std::span<const InputPoint> rows,
                           std::span<const InputPoint> cols);

/// CSV with header "row,col,value", one line per entry, row-major.
void write_gram_csv(const GramMatrix& gram, std::ostream& out);
/// Dense little-endian form: u64 dimension m, then m*m f64 values row-major.
void write_gram_binary(const GramMatrix& gram, std::ostream& out);
Eigen::MatrixXd read_gram_binary(std::istream& in);

}  // namespace dualkern
