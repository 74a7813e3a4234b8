#include "dualkern/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <queue>
#include <set>

#include "dualkern/csv.hpp"

namespace dualkern {

SkeletonGraph SkeletonGraph::with_inputs(std::size_t n, std::size_t d) {
  SkeletonGraph g;
  g.coordinate_count = n;
  g.coordinate_dim = d;
  g.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.nodes[i].coordinate = i;
  return g;
}

NodeId SkeletonGraph::add_node(Activation activation, std::vector<NodeId> inputs, double delta) {
  SkeletonNode node;
  node.activation = std::move(activation);
  node.inputs = std::move(inputs);
  node.delta = delta;
  nodes.push_back(std::move(node));
  return nodes.size() - 1;
}

void SkeletonGraph::add_edge(NodeId u, NodeId v) { nodes.at(v).inputs.push_back(u); }

bool has_errors(const std::vector<Violation>& violations) {
  return std::any_of(violations.begin(), violations.end(),
                     [](const Violation& v) { return v.severity == Violation::Severity::error; });
}

namespace {

std::string describe(const std::vector<Violation>& violations) {
  std::string text = "invalid skeleton:";
  for (const auto& v : violations) {
    if (v.severity == Violation::Severity::error) text += " " + v.message + ";";
  }
  return text;
}

// Kahn's algorithm with a min-heap, so the order is canonical.
// Returns fewer than |V| nodes when the graph has a cycle.
std::vector<NodeId> kahn_order(const SkeletonGraph& g, const std::vector<std::vector<NodeId>>& succ) {
  const std::size_t count = g.nodes.size();
  std::vector<std::size_t> indegree(count, 0);
  for (std::size_t v = 0; v < count; ++v) indegree[v] = g.nodes[v].inputs.size();
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (std::size_t v = 0; v < count; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<NodeId> order;
  order.reserve(count);
  while (!ready.empty()) {
    const NodeId u = ready.top();
    ready.pop();
    order.push_back(u);
    for (NodeId v : succ[u]) {
      if (--indegree[v] == 0) ready.push(v);
    }
  }
  return order;
}

}  // namespace

InvalidSkeleton::InvalidSkeleton(std::vector<Violation> violations)
    : InvalidArgument(describe(violations)), violations_(std::move(violations)) {}

std::vector<Violation> validate(const SkeletonGraph& g) {
  std::vector<Violation> out;
  const auto error = [&](std::string msg) { out.push_back({Violation::Severity::error, std::move(msg)}); };
  const auto warning = [&](std::string msg) { out.push_back({Violation::Severity::warning, std::move(msg)}); };

  if (g.coordinate_count == 0) error("coordinate count n must be positive");
  if (g.coordinate_dim == 0) error("coordinate dimension d must be positive");
  if (!(g.beta >= 0.0 && g.beta <= 1.0)) error("bias beta must lie in [0, 1]");

  const std::size_t count = g.nodes.size();
  if (count < g.coordinate_count) {
    error("fewer nodes than coordinates");
    return out;
  }

  bool edges_ok = true;
  std::vector<std::vector<NodeId>> succ(count);
  for (std::size_t v = 0; v < count; ++v) {
    const auto& node = g.nodes[v];
    const std::string name = "node " + std::to_string(v);
    if (v < g.coordinate_count) {
      if (!node.is_input() || *node.coordinate != v) error(name + " must be the input for coordinate " + std::to_string(v));
      if (node.activation) error(name + " is an input node and cannot carry an activation");
      if (!node.inputs.empty()) error(name + " is an input node and cannot have incoming edges");
      continue;
    }
    if (node.is_input()) {
      error(name + ": input nodes must occupy ids 0..n-1");
      continue;
    }
    if (!node.activation) {
      error(name + " has no activation");
    } else if (std::abs(node.activation->gaussian_norm() - 1.0) > 1e-10) {
      error(name + " has an unnormalized activation");
    }
    if (!(node.delta > 0.0) || !std::isfinite(node.delta)) error(name + " has a non-positive node weight");
    if (node.inputs.empty()) error(name + " has no incoming edges");
    std::set<NodeId> seen;
    for (NodeId u : node.inputs) {
      if (u >= count) {
        error(name + " has an edge from unknown node " + std::to_string(u));
        edges_ok = false;
        continue;
      }
      if (u == v) error(name + " has a self-loop");
      if (!seen.insert(u).second) error(name + " has a duplicate edge from node " + std::to_string(u));
      succ[u].push_back(v);
    }
  }
  if (!edges_ok) return out;

  const auto order = kahn_order(g, succ);
  if (order.size() != count) error("graph contains a cycle");

  std::size_t sinks = 0;
  for (std::size_t v = 0; v < count; ++v) {
    if (!succ[v].empty()) continue;
    if (v < g.coordinate_count) {
      error("input node " + std::to_string(v) + " has no outgoing edges");
    } else {
      ++sinks;
    }
  }
  if (sinks != 1) error("skeleton must have exactly one output node, found " + std::to_string(sinks));

  std::map<std::vector<NodeId>, NodeId> neighbourhoods;
  for (std::size_t v = g.coordinate_count; v < count; ++v) {
    auto in = g.nodes[v].inputs;
    std::sort(in.begin(), in.end());
    auto [it, inserted] = neighbourhoods.emplace(in, v);
    if (!inserted) {
      warning("nodes " + std::to_string(it->second) + " and " + std::to_string(v) +
              " have identical in-neighbourhoods (skeleton is reducible)");
    }
  }
  return out;
}

Skeleton::Skeleton(SkeletonGraph graph) : graph_(std::move(graph)) {
  auto violations = validate(graph_);
  if (has_errors(violations)) throw InvalidSkeleton(std::move(violations));
  warnings_ = std::move(violations);

  const std::size_t count = graph_.nodes.size();
  successors_.assign(count, {});
  for (std::size_t v = 0; v < count; ++v) {
    for (NodeId u : graph_.nodes[v].inputs) successors_[u].push_back(v);
  }
  order_ = kahn_order(graph_, successors_);

  std::vector<std::size_t> node_depth(count, 0);
  for (NodeId v : order_) {
    const auto& node = graph_.nodes[v];
    if (node.is_input()) continue;
    internal_order_.push_back(v);
    std::size_t deepest = 0;
    for (NodeId u : node.inputs) deepest = std::max(deepest, node_depth[u]);
    node_depth[v] = deepest + 1;
    if (successors_[v].empty()) output_ = v;
  }
  depth_ = node_depth[output_];
}

std::size_t Skeleton::edge_count() const noexcept {
  std::size_t e = 0;
  for (const auto& node : graph_.nodes) e += node.inputs.size();
  return e;
}

Skeleton Skeleton::with_beta(double beta) const {
  SkeletonGraph g = graph_;
  g.beta = beta;
  Skeleton out(std::move(g));
  if (layers_) {
    out.layers_ = layers_;
    out.layers_->beta = beta;
  }
  return out;
}

std::string Skeleton::hash() const {
  std::string text = std::to_string(graph_.coordinate_count) + " " + std::to_string(graph_.coordinate_dim) +
                     " " + format_double(graph_.beta) + "\n";
  for (std::size_t v = graph_.coordinate_count; v < graph_.nodes.size(); ++v) {
    const auto& node = graph_.nodes[v];
    text += node.activation->token() + " " + format_double(node.delta);
    if (node.activation->kind() == ActivationKind::custom) {
      for (double c : node.activation->custom_coefficients()) text += " " + format_double(c);
    }
    text += " <-";
    for (NodeId u : node.inputs) text += " " + std::to_string(u);
    text += "\n";
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

std::vector<std::vector<std::size_t>> conv1d_windows(std::size_t n, std::size_t width, std::size_t stride) {
  if (width == 0 || stride == 0) throw InvalidArgument("conv layer: width and stride must be positive");
  if (n < width || (n - width) % stride != 0) {
    throw InvalidArgument("conv layer: width " + std::to_string(width) + " and stride " +
                          std::to_string(stride) + " do not tile " + std::to_string(n) + " nodes");
  }
  const std::size_t q = (n - width) / stride + 1;
  std::vector<std::vector<std::size_t>> windows(q);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < width; ++j) windows[i].push_back(stride * i + j);
  }
  return windows;
}

Skeleton Skeleton::from_layers(const LayeredSpec& spec) {
  if (spec.layers.empty()) throw InvalidArgument("skeleton needs at least one layer");
  if (spec.layers.back().kind != LayerKind::fc) {
    throw InvalidArgument("final layer must be fully connected (single output)");
  }
  SkeletonGraph g = SkeletonGraph::with_inputs(spec.coordinate_count, spec.coordinate_dim);
  g.beta = spec.beta.value_or(0.0);
  std::vector<NodeId> frontier(spec.coordinate_count);
  for (std::size_t i = 0; i < frontier.size(); ++i) frontier[i] = i;

  for (const auto& layer : spec.layers) {
    const double delta = layer.delta.value_or(1.0);
    std::vector<NodeId> next;
    if (layer.kind == LayerKind::fc) {
      next.push_back(g.add_node(layer.activation, frontier, delta));
    } else {
      for (const auto& window : conv1d_windows(frontier.size(), layer.width, layer.stride)) {
        std::vector<NodeId> in;
        for (std::size_t idx : window) in.push_back(frontier[idx]);
        next.push_back(g.add_node(layer.activation, std::move(in), delta));
      }
    }
    frontier = std::move(next);
  }
  Skeleton s(std::move(g));
  s.layers_ = spec;
  return s;
}

}  // namespace dualkern
