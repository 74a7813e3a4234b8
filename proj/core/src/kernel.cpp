#include "dualkern/kernel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <thread>

#include "dualkern/csv.hpp"
#include "dualkern/error.hpp"

namespace dualkern {

CompositionalKernel::CompositionalKernel(Skeleton skeleton, const ExpansionOptions& options)
    : skeleton_(std::move(skeleton)), duals_(skeleton_.nodes().size()) {
  for (NodeId v : skeleton_.internal_order()) duals_[v] = dual_of(*skeleton_.node(v).activation, options);
}

const DualActivation& CompositionalKernel::dual(NodeId v) const {
  if (v >= duals_.size() || !duals_[v]) throw InvalidArgument("node has no dual activation");
  return *duals_[v];
}

void CompositionalKernel::check_conformant(const InputPoint& x) const {
  if (x.coordinate_count() != skeleton_.coordinate_count() || x.coordinate_dim() != skeleton_.coordinate_dim()) {
    throw ShapeError("input has shape (n=" + std::to_string(x.coordinate_count()) +
                     ", d=" + std::to_string(x.coordinate_dim()) + "), skeleton expects (n=" +
                     std::to_string(skeleton_.coordinate_count()) + ", d=" +
                     std::to_string(skeleton_.coordinate_dim()) + ")");
  }
}

std::vector<double> CompositionalKernel::node_values(const InputPoint& x, const InputPoint& y) const {
  check_conformant(x);
  check_conformant(y);
  const double beta = skeleton_.beta();
  std::vector<double> k(skeleton_.nodes().size(), 0.0);
  for (NodeId v : skeleton_.topological_order()) {
    const auto& node = skeleton_.node(v);
    if (node.is_input()) {
      const auto xi = x.coordinate(*node.coordinate);
      const auto yi = y.coordinate(*node.coordinate);
      // Identical unit vectors: exactly 1, not the rounded dot product.
      if (std::equal(xi.begin(), xi.end(), yi.begin())) {
        k[v] = 1.0;
        continue;
      }
      double dot = 0.0;
      for (std::size_t j = 0; j < xi.size(); ++j) dot += xi[j] * yi[j];
      k[v] = dot;
      continue;
    }
    double sum = 0.0;
    for (NodeId u : node.inputs) sum += k[u];
    const double mean = sum / double(node.inputs.size());
    const double arg = clamp_correlation((1.0 - beta) * mean + beta, 1e-8);
    k[v] = (*duals_[v])(arg);
  }
  return k;
}

double CompositionalKernel::operator()(const InputPoint& x, const InputPoint& y) const {
  return node_values(x, y)[skeleton_.output()];
}

double kernel_eval(const Skeleton& skeleton, const InputPoint& x, const InputPoint& y) {
  return CompositionalKernel(skeleton)(x, y);
}

double GramMatrix::min_eigenvalue() const {
  if (values.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(values, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

GramMatrix gram(const CompositionalKernel& kernel, std::span<const InputPoint> points, unsigned threads) {
  if (points.empty()) throw InvalidArgument("gram: need at least one point");
  for (const auto& p : points) kernel.check_conformant(p);
  const auto m = Eigen::Index(points.size());
  GramMatrix g{Eigen::MatrixXd::Zero(m, m), kernel.skeleton().hash()};

  const auto work = [&](unsigned worker, unsigned workers) {
    for (Eigen::Index i = worker; i < m; i += workers) {
      for (Eigen::Index j = i; j < m; ++j) g.values(i, j) = kernel(points[i], points[j]);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, unsigned(m)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) g.values(i, j) = g.values(j, i);
  }
  return g;
}

GramMatrix gram(const Skeleton& skeleton, std::span<const InputPoint> points, unsigned threads) {
  return gram(CompositionalKernel(skeleton), points, threads);
}

Eigen::MatrixXd cross_gram(const CompositionalKernel& kernel, std::span<const InputPoint> rows,
                           std::span<const InputPoint> cols) {
  Eigen::MatrixXd k(Eigen::Index(rows.size()), Eigen::Index(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) k(Eigen::Index(i), Eigen::Index(j)) = kernel(rows[i], cols[j]);
  }
  return k;
}

void write_gram_csv(const GramMatrix& gram, std::ostream& out) {
  out << "row,col,value\n";
  for (Eigen::Index i = 0; i < gram.size(); ++i) {
    for (Eigen::Index j = 0; j < gram.size(); ++j) {
      out << i << ',' << j << ',' << format_double(gram.values(i, j)) << '\n';
    }
  }
}

namespace {

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "big-endian hosts are not supported");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw InvalidArgument("truncated binary input");
  return value;
}

}  // namespace

void write_gram_binary(const GramMatrix& gram, std::ostream& out) {
  put_le<std::uint64_t>(out, std::uint64_t(gram.size()));
  for (Eigen::Index i = 0; i < gram.size(); ++i) {
    for (Eigen::Index j = 0; j < gram.size(); ++j) put_le<double>(out, gram.values(i, j));
  }
}

Eigen::MatrixXd read_gram_binary(std::istream& in) {
  const auto m = Eigen::Index(get_le<std::uint64_t>(in));
  Eigen::MatrixXd values(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) values(i, j) = get_le<double>(in);
  }
  return values;
}

}  // namespace dualkern
