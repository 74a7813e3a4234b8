#pragma once

#include <iosfwd>
#include <string>

#include "dualkern/network.hpp"

namespace dualkern {

/// Binary weight file, little-endian:
///   "DKRN", u32 version, u64 r, u64 k, u64 edge count,
///   edge-count pairs (u64 edge id, f64 weight),
///   then (u64 neuron id, f64 bias) pairs to end of file.
/// Only nonzero biases are written.
inline constexpr std::uint32_t weight_file_version = 1;

void write_weights(const Network& net, const WeightAssignment& w, std::ostream& out);
WeightAssignment read_weights(const Network& net, std::istream& in);

/// JSON sidecar: {"seed", "beta", "skeleton_hash", "r", "k", "version"}.
std::string weights_sidecar(const Network& net, const WeightAssignment& w);

/// Writes `path` and `path + ".json"`.
void save_weights(const Network& net, const WeightAssignment& w, const std::string& path);
/// Reads `path`; seed and beta come from the sidecar when present.
WeightAssignment load_weights(const Network& net, const std::string& path);

}  // namespace dualkern
