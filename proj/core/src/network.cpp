#include "dualkern/network.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "dualkern/error.hpp"
#include "dualkern/rng.hpp"

namespace dualkern {
namespace {
constexpr std::uint64_t weight_stream = 0;
constexpr std::uint64_t bias_stream = 1;
constexpr std::uint64_t marginal_stream_base = 2;
}  // namespace

Network::Network(Skeleton skeleton, std::size_t r, std::size_t k)
    : skeleton_(std::move(skeleton)), r_(r), k_(k) {
  if (r < 1) throw InvalidArgument("realize: r must be >= 1");
  const auto& nodes = skeleton_.nodes();
  neuron_offset_.resize(nodes.size());
  std::uint64_t offset = 0;
  for (NodeId v = 0; v < nodes.size(); ++v) {
    neuron_offset_[v] = offset;
    offset += group_size(v);
  }
  output_offset_ = offset;

  blocks_into_.assign(nodes.size(), {});
  std::uint64_t edge = 0;
  for (NodeId v : skeleton_.internal_order()) {
    for (NodeId u : nodes[v].inputs) {
      EdgeBlock b;
      b.source = u;
      b.target = v;
      b.source_width = group_size(u);
      b.target_width = r_;
      b.first_edge = edge;
      b.source_is_input = nodes[u].is_input();
      edge += b.edge_count();
      blocks_into_[v].push_back(blocks_.size());
      blocks_.push_back(b);
    }
  }
  if (k_ > 0) {
    EdgeBlock b;
    b.source = skeleton_.output();
    b.target = EdgeBlock::output_layer;
    b.source_width = r_;
    b.target_width = k_;
    b.first_edge = edge;
    edge += b.edge_count();
    blocks_.push_back(b);
  }
  edge_count_ = edge;
}

std::size_t Network::group_size(NodeId v) const {
  return skeleton_.node(v).is_input() ? skeleton_.coordinate_dim() : r_;
}

double Network::neuron_weight(NodeId v) const {
  const auto& node = skeleton_.node(v);
  return node.is_input() ? 1.0 / double(skeleton_.coordinate_dim()) : node.delta / double(r_);
}

void Network::for_each_edge(const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& f) const {
  for (const auto& b : blocks_) {
    const std::uint64_t src = neuron_offset_[b.source];
    const std::uint64_t dst = b.target == EdgeBlock::output_layer ? output_offset_ : neuron_offset_[b.target];
    for (std::size_t t = 0; t < b.target_width; ++t) {
      for (std::size_t s = 0; s < b.source_width; ++s) {
        f(b.first_edge + std::uint64_t(t) * b.source_width + s, src + s, dst + t);
      }
    }
  }
}

Network realize(const Skeleton& skeleton, std::size_t r, std::size_t k) { return Network(skeleton, r, k); }

std::vector<double> block_variances(const Network& net, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidArgument("beta must lie in [0, 1]");
  const auto& s = net.skeleton();
  const double d = double(s.coordinate_dim());
  std::vector<double> out;
  out.reserve(net.blocks().size());
  for (const auto& b : net.blocks()) {
    // delta(IN(v)) summed over the neurons feeding one neuron of the target.
    double in_weight = 0.0;
    if (b.target == EdgeBlock::output_layer) {
      in_weight = double(net.replication()) * net.neuron_weight(b.source);
    } else {
      for (NodeId u : s.node(b.target).inputs) in_weight += double(net.group_size(u)) * net.neuron_weight(u);
    }
    const double du = net.neuron_weight(b.source);
    double var = 0.0;
    if (b.source_is_input) {
      var = d * du / in_weight;
    } else {
      const double norm = s.node(b.source).activation->gaussian_norm();
      var = du / (norm * norm * in_weight);
    }
    out.push_back((1.0 - beta) * var);
  }
  return out;
}

WeightAssignment init_weights(const Network& net, std::uint64_t seed, double beta) {
  const auto variances = block_variances(net, beta);
  const CounterRng rng(seed);
  WeightAssignment w;
  w.seed = seed;
  w.beta = beta;
  w.blocks.reserve(net.blocks().size());
  for (std::size_t i = 0; i < net.blocks().size(); ++i) {
    const auto& b = net.blocks()[i];
    const double sd = std::sqrt(variances[i]);
    Eigen::MatrixXd m(Eigen::Index(b.target_width), Eigen::Index(b.source_width));
    for (std::size_t t = 0; t < b.target_width; ++t) {
      for (std::size_t s = 0; s < b.source_width; ++s) {
        m(Eigen::Index(t), Eigen::Index(s)) =
            sd * rng.normal(weight_stream, b.first_edge + std::uint64_t(t) * b.source_width + s);
      }
    }
    w.blocks.push_back(std::move(m));
  }
  w.biases.assign(net.neuron_count(), 0.0);
  if (beta > 0.0) {
    const double sd = std::sqrt(beta);
    const std::uint64_t first_internal = net.skeleton().coordinate_count() * net.skeleton().coordinate_dim();
    for (std::uint64_t id = first_internal; id < net.neuron_count(); ++id) w.biases[id] = sd * rng.normal(bias_stream, id);
  }
  return w;
}

WeightAssignment WeightAssignment::scaled(double c) const {
  WeightAssignment out = *this;
  for (auto& m : out.blocks) m *= c;
  return out;
}

double WeightAssignment::weight(const Network& net, std::uint64_t edge_id) const {
  const auto& bl = net.blocks();
  for (std::size_t i = 0; i < bl.size(); ++i) {
    if (edge_id >= bl[i].first_edge && edge_id < bl[i].first_edge + bl[i].edge_count()) {
      const std::uint64_t local = edge_id - bl[i].first_edge;
      return blocks[i](Eigen::Index(local / bl[i].source_width), Eigen::Index(local % bl[i].source_width));
    }
  }
  throw InvalidArgument("unknown edge id");
}

namespace {

void check_points(const Network& net, std::span<const InputPoint> points) {
  const auto& s = net.skeleton();
  for (const auto& p : points) {
    if (p.coordinate_count() != s.coordinate_count() || p.coordinate_dim() != s.coordinate_dim()) {
      throw ShapeError("input does not match the network's (n, d)");
    }
  }
}

Eigen::MatrixXd input_group(const InputPoint* points, std::size_t count, std::size_t coordinate, std::size_t d) {
  Eigen::MatrixXd h(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(count));
  for (std::size_t p = 0; p < count; ++p) {
    const auto c = points[p].coordinate(coordinate);
    for (std::size_t j = 0; j < d; ++j) h(Eigen::Index(j), Eigen::Index(p)) = c[j];
  }
  return h;
}

void apply_activation(const Activation& sigma, Eigen::MatrixXd& z) {
  z = z.unaryExpr([&sigma](double x) { return sigma(x); });
}

double representation_divisor(const Network& net) {
  const auto& out = net.skeleton().node(net.skeleton().output());
  return out.activation->gaussian_norm() * std::sqrt(double(net.representation_width()));
}

}  // namespace

std::vector<Eigen::MatrixXd> forward_groups(const Network& net, const WeightAssignment& w,
                                            std::span<const InputPoint> points) {
  check_points(net, points);
  const auto& s = net.skeleton();
  if (w.blocks.size() != net.blocks().size() || (!w.biases.empty() && w.biases.size() != net.neuron_count())) {
    throw InvalidArgument("weights do not match the network");
  }
  std::vector<Eigen::MatrixXd> h(s.nodes().size());
  for (NodeId v = 0; v < s.coordinate_count(); ++v) {
    h[v] = input_group(points.data(), points.size(), *s.node(v).coordinate, s.coordinate_dim());
  }
  const auto cols = Eigen::Index(points.size());
  for (NodeId v : s.internal_order()) {
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(Eigen::Index(net.replication()), cols);
    for (std::size_t bi : net.blocks_into(v)) z.noalias() += w.blocks[bi] * h[net.blocks()[bi].source];
    if (!w.biases.empty()) {
      const auto offset = Eigen::Index(net.neuron_offset(v));
      const Eigen::Map<const Eigen::VectorXd> b(w.biases.data() + offset, Eigen::Index(net.replication()));
      z.colwise() += b;
    }
    apply_activation(*s.node(v).activation, z);
    h[v] = std::move(z);
  }
  return h;
}

Eigen::MatrixXd forward(const Network& net, const WeightAssignment& w, std::span<const InputPoint> points) {
  if (net.outputs() == 0) throw InvalidArgument("forward: network has no output layer");
  const auto h = forward_groups(net, w, points);
  Eigen::MatrixXd out = w.blocks.back() * h[net.skeleton().output()];
  if (!w.biases.empty()) {
    const Eigen::Map<const Eigen::VectorXd> b(w.biases.data() + net.output_offset(), Eigen::Index(net.outputs()));
    out.colwise() += b;
  }
  return out;
}

Eigen::VectorXd forward(const Network& net, const WeightAssignment& w, const InputPoint& x) {
  return forward(net, w, std::span<const InputPoint>(&x, 1)).col(0);
}

Eigen::MatrixXd representation(const Network& net, const WeightAssignment& w, std::span<const InputPoint> points) {
  auto h = forward_groups(net, w, points);
  return h[net.skeleton().output()] / representation_divisor(net);
}

Eigen::VectorXd representation(const Network& net, const WeightAssignment& w, const InputPoint& x) {
  return representation(net, w, std::span<const InputPoint>(&x, 1)).col(0);
}

double empirical_kernel(const Network& net, const WeightAssignment& w, const InputPoint& x, const InputPoint& y) {
  const InputPoint pair[] = {x, y};
  const Eigen::MatrixXd psi = representation(net, w, pair);
  return psi.col(0).dot(psi.col(1));
}

Eigen::MatrixXd sample_representation(const Network& net, std::uint64_t seed, double beta,
                                      std::span<const InputPoint> points) {
  check_points(net, points);
  const auto variances = block_variances(net, beta);
  const auto& s = net.skeleton();
  const CounterRng rng(seed);
  const auto count = Eigen::Index(points.size());
  const auto r = Eigen::Index(net.replication());

  std::vector<Eigen::MatrixXd> h(s.nodes().size());
  for (NodeId v = 0; v < s.coordinate_count(); ++v) {
    h[v] = input_group(points.data(), points.size(), *s.node(v).coordinate, s.coordinate_dim());
  }
  for (NodeId v : s.internal_order()) {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(count, count, beta);
    for (std::size_t bi : net.blocks_into(v)) {
      const auto& src = h[net.blocks()[bi].source];
      cov.noalias() += variances[bi] * (src.transpose() * src);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw NumericalError("sample_representation: eigen solve failed");
    const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXd factor = eig.eigenvectors() * root.asDiagonal();

    Eigen::MatrixXd g(r, count);
    const std::uint64_t stream = marginal_stream_base + v;
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index p = 0; p < count; ++p) g(i, p) = rng.normal(stream, std::uint64_t(i * count + p));
    }
    Eigen::MatrixXd z = g * factor.transpose();
    apply_activation(*s.node(v).activation, z);
    h[v] = std::move(z);
  }
  return h[s.output()] / representation_divisor(net);
}

}  // namespace dualkern
