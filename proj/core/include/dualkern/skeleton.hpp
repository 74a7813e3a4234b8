#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualkern/activation.hpp"
#include "dualkern/error.hpp"

namespace dualkern {

using NodeId = std::size_t;

struct SkeletonNode {
  /// Set for input nodes: the 0-based coordinate index this node reads.
  std::optional<std::size_t> coordinate;
  /// Set for internal nodes.
  std::optional<Activation> activation;
  /// Node weight delta_v used by the random initialization.
  double delta = 1.0;
  /// In-neighbours IN(v), in insertion order.
  std::vector<NodeId> inputs;

  bool is_input() const noexcept { return coordinate.has_value(); }
};

/// Unvalidated computation-skeleton DAG. Input nodes occupy ids 0..n-1.
struct SkeletonGraph {
  std::size_t coordinate_count = 0;  // n
  std::size_t coordinate_dim = 0;    // d
  double beta = 0.0;
  std::vector<SkeletonNode> nodes;

  /// Graph with n input nodes reading coordinates 0..n-1 and nothing else.
  static SkeletonGraph with_inputs(std::size_t n, std::size_t d);

  NodeId add_node(Activation activation, std::vector<NodeId> inputs, double delta = 1.0);
  /// Appends u to IN(v) without any checking (cycles are caught by validate).
  void add_edge(NodeId u, NodeId v);
};

struct Violation {
  enum class Severity { error, warning };
  Severity severity;
  std::string message;
};

/// Empty iff every structural invariant holds. Irreducibility (two internal
/// nodes with identical in-neighbourhoods) is reported as a warning.
std::vector<Violation> validate(const SkeletonGraph& graph);

bool has_errors(const std::vector<Violation>& violations);

class InvalidSkeleton : public InvalidArgument {
 public:
  explicit InvalidSkeleton(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

enum class LayerKind { fc, conv1d };

struct LayerSpec {
  LayerKind kind = LayerKind::fc;
  /// conv1d only.
  std::size_t width = 0;
  std::size_t stride = 0;
  Activation activation = Activation::identity();
  std::optional<double> delta;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Layer-by-layer description, the form the DSL reads and writes.
struct LayeredSpec {
  std::size_t coordinate_count = 0;
  std::size_t coordinate_dim = 0;
  std::optional<double> beta;
  std::vector<LayerSpec> layers;

  friend bool operator==(const LayeredSpec&, const LayeredSpec&) = default;
};

/// Validated, immutable computation skeleton with a single output node.
class Skeleton {
 public:
  /// Throws InvalidSkeleton when validate() reports errors.
  explicit Skeleton(SkeletonGraph graph);
  /// Builds the DAG layer by layer; throws InvalidArgument on
  /// width/stride that do not tile the incoming nodes.
  static Skeleton from_layers(const LayeredSpec& spec);

  const SkeletonGraph& graph() const noexcept { return graph_; }
  const std::vector<SkeletonNode>& nodes() const noexcept { return graph_.nodes; }
  const SkeletonNode& node(NodeId id) const { return graph_.nodes.at(id); }
  std::size_t coordinate_count() const noexcept { return graph_.coordinate_count; }
  std::size_t coordinate_dim() const noexcept { return graph_.coordinate_dim; }
  double beta() const noexcept { return graph_.beta; }
  NodeId output() const noexcept { return output_; }

  /// All nodes, inputs first, in canonical (smallest-id-first Kahn) order.
  const std::vector<NodeId>& topological_order() const noexcept { return order_; }
  /// Internal nodes only, in topological order.
  const std::vector<NodeId>& internal_order() const noexcept { return internal_order_; }
  /// Out-neighbours of each node.
  const std::vector<std::vector<NodeId>>& successors() const noexcept { return successors_; }

  /// Longest input-to-output path counted in internal nodes.
  std::size_t depth() const noexcept { return depth_; }
  /// Number of non-input nodes, |S|.
  std::size_t size() const noexcept { return internal_order_.size(); }
  std::size_t edge_count() const noexcept;

  /// Warnings kept from validation (irreducibility).
  const std::vector<Violation>& warnings() const noexcept { return warnings_; }

  /// Layered form, present when built from layers or parsed from the DSL.
  const std::optional<LayeredSpec>& layers() const noexcept { return layers_; }

  /// Copy with a different bias parameter beta in [0, 1].
  Skeleton with_beta(double beta) const;

  /// FNV-1a 64-bit hash of the canonical graph text, as 16 hex digits.
  std::string hash() const;

 private:
  SkeletonGraph graph_;
  NodeId output_ = 0;
  std::vector<NodeId> order_;
  std::vector<NodeId> internal_order_;
  std::vector<std::vector<NodeId>> successors_;
  std::size_t depth_ = 0;
  std::vector<Violation> warnings_;
  std::optional<LayeredSpec> layers_;
};

/// Builds the (n, q) conv1d wiring: node i (0-based) reads inputs s*i .. s*i+w-1.
/// Returns the per-output-node input index lists; throws when n != s(q-1)+w.
std::vector<std::vector<std::size_t>> conv1d_windows(std::size_t n, std::size_t width, std::size_t stride);

}  // namespace dualkern
