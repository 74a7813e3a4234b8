#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "dualkern/encoding.hpp"
#include "dualkern/skeleton.hpp"

namespace dualkern {

/// One skeleton edge u -> v expanded into the complete bipartite block
/// between the copies of u and the copies of v. Edge ids inside the block
/// are first_edge + target_copy * source_width + source_copy.
struct EdgeBlock {
  static constexpr NodeId output_layer = std::numeric_limits<NodeId>::max();

  NodeId source = 0;
  /// Skeleton node, or output_layer for the block feeding the k outputs.
  NodeId target = 0;
  std::size_t source_width = 0;
  std::size_t target_width = 0;
  std::uint64_t first_edge = 0;
  bool source_is_input = false;

  std::uint64_t edge_count() const noexcept { return std::uint64_t(source_width) * target_width; }
};

/// The (r, k)-fold realization N(S, r, k): d input neurons per input node,
/// r neurons per internal node, and k identity output neurons attached to
/// the copies of the output node. k = 0 gives the r-fold realization N(S, r)
/// (representation only). Edges are implicit; see EdgeBlock.
class Network {
 public:
  Network(Skeleton skeleton, std::size_t r, std::size_t k);

  const Skeleton& skeleton() const noexcept { return skeleton_; }
  std::size_t replication() const noexcept { return r_; }
  std::size_t outputs() const noexcept { return k_; }
  /// q: width of the representation layer (r for a single-output skeleton).
  std::size_t representation_width() const noexcept { return r_; }

  /// d for input nodes, r for internal nodes.
  std::size_t group_size(NodeId v) const;
  /// Id of the first neuron of node v's group. Inputs come first, then
  /// internal groups by node id, then the k outputs.
  std::uint64_t neuron_offset(NodeId v) const { return neuron_offset_.at(v); }
  std::uint64_t output_offset() const noexcept { return output_offset_; }
  std::uint64_t neuron_count() const noexcept { return output_offset_ + k_; }
  std::uint64_t edge_count() const noexcept { return edge_count_; }

  /// Node weight of each neuron in group v: 1/d for inputs, delta_v / r internal.
  double neuron_weight(NodeId v) const;

  /// Skeleton edges grouped by target (internal topological order, in IN(v)
  /// order), followed by the output block when k > 0.
  const std::vector<EdgeBlock>& blocks() const noexcept { return blocks_; }
  /// Blocks feeding node v (indices into blocks()).
  const std::vector<std::size_t>& blocks_into(NodeId v) const { return blocks_into_.at(v); }

  /// Calls f(edge_id, source_neuron, target_neuron) for every edge.
  void for_each_edge(const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& f) const;

 private:
  Skeleton skeleton_;
  std::size_t r_;
  std::size_t k_;
  std::vector<std::uint64_t> neuron_offset_;
  std::uint64_t output_offset_ = 0;
  std::uint64_t edge_count_ = 0;
  std::vector<EdgeBlock> blocks_;
  std::vector<std::vector<std::size_t>> blocks_into_;
};

Network realize(const Skeleton& skeleton, std::size_t r, std::size_t k = 0);

/// Concrete Gaussian weights and biases for a network.
struct WeightAssignment {
  std::uint64_t seed = 0;
  double beta = 0.0;
  /// One dense matrix per EdgeBlock, target_width x source_width.
  std::vector<Eigen::MatrixXd> blocks;
  /// Bias per neuron id; zero on input neurons and whenever beta = 0.
  std::vector<double> biases;

  /// Copy with every edge weight multiplied by c (biases unchanged).
  WeightAssignment scaled(double c) const;
  double weight(const Network& net, std::uint64_t edge_id) const;
};

/// Variance of every weight in each block:
/// (1-beta) d delta(u) / delta(IN(v)) from input neurons and
/// (1-beta) delta(u) / (||sigma_u||^2 delta(IN(v))) otherwise.
std::vector<double> block_variances(const Network& net, double beta);

/// beta-biased random initialization. Each weight is derived from
/// (seed, edge id) and each bias from (seed, neuron id), so the result
/// does not depend on evaluation order.
WeightAssignment init_weights(const Network& net, std::uint64_t seed, double beta = 0.0);

/// Post-activation values of node v's group for each point (group_size x P).
/// The returned vector is indexed by skeleton node id.
std::vector<Eigen::MatrixXd> forward_groups(const Network& net, const WeightAssignment& w,
                                            std::span<const InputPoint> points);

/// Network outputs, k x P.
Eigen::MatrixXd forward(const Network& net, const WeightAssignment& w, std::span<const InputPoint> points);
Eigen::VectorXd forward(const Network& net, const WeightAssignment& w, const InputPoint& x);

/// Normalized representation Psi_w: output-node group divided by ||sigma|| sqrt(q); q x P.
Eigen::MatrixXd representation(const Network& net, const WeightAssignment& w, std::span<const InputPoint> points);
Eigen::VectorXd representation(const Network& net, const WeightAssignment& w, const InputPoint& x);

/// kappa_w(x, y) = <Psi_w(x), Psi_w(y)>.
double empirical_kernel(const Network& net, const WeightAssignment& w, const InputPoint& x, const InputPoint& y);

/// Draws Psi_w over a fixed point set without materializing weights.
/// Given the previous layers, each neuron's pre-activations over the points
/// are jointly Gaussian with covariance sum_u var_u H_u^T H_u + beta 11^T;
/// that vector is sampled directly. Same law as init_weights + representation,
/// at O(r P^2) per node instead of O(r * fan-in * P).
Eigen::MatrixXd sample_representation(const Network& net, std::uint64_t seed, double beta,
                                      std::span<const InputPoint> points);

}  // namespace dualkern
