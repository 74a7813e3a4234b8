#include "dualkern/weights_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "dualkern/error.hpp"

namespace dualkern {
namespace {

constexpr char magic[4] = {'D', 'K', 'R', 'N'};

static_assert(std::endian::native == std::endian::little, "weight files assume a little-endian host");

template <class T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <class T>
bool get(std::istream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  return in.gcount() == std::streamsize(sizeof value);
}

template <class T>
T require(std::istream& in, const char* what) {
  T value{};
  if (!get(in, value)) throw ParseError(0, 0, std::string("weight file truncated in ") + what);
  return value;
}

}  // namespace

void write_weights(const Network& net, const WeightAssignment& w, std::ostream& out) {
  if (w.blocks.size() != net.blocks().size()) throw InvalidArgument("weights do not match the network");
  out.write(magic, 4);
  put<std::uint32_t>(out, weight_file_version);
  put<std::uint64_t>(out, net.replication());
  put<std::uint64_t>(out, net.outputs());
  put<std::uint64_t>(out, net.edge_count());
  for (std::size_t i = 0; i < net.blocks().size(); ++i) {
    const auto& b = net.blocks()[i];
    const auto& m = w.blocks[i];
    for (std::size_t t = 0; t < b.target_width; ++t) {
      for (std::size_t s = 0; s < b.source_width; ++s) {
        put<std::uint64_t>(out, b.first_edge + std::uint64_t(t) * b.source_width + s);
        put<double>(out, m(Eigen::Index(t), Eigen::Index(s)));
      }
    }
  }
  for (std::uint64_t id = 0; id < w.biases.size(); ++id) {
    if (w.biases[id] != 0.0) {
      put<std::uint64_t>(out, id);
      put<double>(out, w.biases[id]);
    }
  }
  if (!out) throw std::runtime_error("failed writing weight file");
}

WeightAssignment read_weights(const Network& net, std::istream& in) {
  char head[4];
  in.read(head, 4);
  if (in.gcount() != 4 || std::memcmp(head, magic, 4) != 0) throw ParseError(0, 0, "not a weight file (bad magic)");
  const auto version = require<std::uint32_t>(in, "header");
  if (version != weight_file_version) throw ParseError(0, 0, "unsupported weight file version " + std::to_string(version));
  const auto r = require<std::uint64_t>(in, "header");
  const auto k = require<std::uint64_t>(in, "header");
  const auto edges = require<std::uint64_t>(in, "header");
  if (r != net.replication() || k != net.outputs() || edges != net.edge_count()) {
    throw ShapeError("weight file header does not match the network");
  }

  WeightAssignment w;
  for (const auto& b : net.blocks()) {
    w.blocks.emplace_back(Eigen::MatrixXd::Zero(Eigen::Index(b.target_width), Eigen::Index(b.source_width)));
  }
  std::size_t block = 0;
  for (std::uint64_t i = 0; i < edges; ++i) {
    const auto id = require<std::uint64_t>(in, "edge list");
    const auto value = require<double>(in, "edge list");
    while (block < net.blocks().size() &&
           id >= net.blocks()[block].first_edge + net.blocks()[block].edge_count()) {
      ++block;
    }
    if (block == net.blocks().size() || id < net.blocks()[block].first_edge) {
      // Out-of-order ids: fall back to a search.
      block = 0;
      while (block < net.blocks().size() &&
             !(id >= net.blocks()[block].first_edge &&
               id < net.blocks()[block].first_edge + net.blocks()[block].edge_count())) {
        ++block;
      }
      if (block == net.blocks().size()) throw ParseError(0, 0, "edge id out of range");
    }
    const auto& b = net.blocks()[block];
    const std::uint64_t local = id - b.first_edge;
    w.blocks[block](Eigen::Index(local / b.source_width), Eigen::Index(local % b.source_width)) = value;
  }
  w.biases.assign(net.neuron_count(), 0.0);
  std::uint64_t id = 0;
  while (get(in, id)) {
    const auto value = require<double>(in, "bias list");
    if (id >= w.biases.size()) throw ParseError(0, 0, "bias neuron id out of range");
    w.biases[id] = value;
  }
  return w;
}

std::string weights_sidecar(const Network& net, const WeightAssignment& w) {
  nlohmann::ordered_json j;
  j["version"] = weight_file_version;
  j["seed"] = w.seed;
  j["beta"] = w.beta;
  j["skeleton_hash"] = net.skeleton().hash();
  j["r"] = net.replication();
  j["k"] = net.outputs();
  return j.dump(2) + "\n";
}

void save_weights(const Network& net, const WeightAssignment& w, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_weights(net, w, out);
  std::ofstream side(path + ".json");
  if (!side) throw std::runtime_error("cannot open " + path + ".json");
  side << weights_sidecar(net, w);
}

WeightAssignment load_weights(const Network& net, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto w = read_weights(net, in);
  std::ifstream side(path + ".json");
  if (side) {
    const auto j = nlohmann::json::parse(side);
    if (j.value("skeleton_hash", net.skeleton().hash()) != net.skeleton().hash()) {
      throw ShapeError("weight sidecar belongs to a different skeleton");
    }
    w.seed = j.value("seed", std::uint64_t{0});
    w.beta = j.value("beta", 0.0);
  }
  return w;
}

}  // namespace dualkern
