#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dualkern/encoding.hpp"

namespace dualkern {

struct Dataset {
  std::vector<InputPoint> points;
  Eigen::VectorXd labels;

  std::size_t size() const noexcept { return points.size(); }
};

struct DatasetSplit {
  Dataset train;
  Dataset test;
};

/// Shuffles by seed, then puts the first round(fraction * m) points in train.
DatasetSplit split_dataset(const Dataset& data, double train_fraction, std::uint64_t seed);

/// Points of {-1, +1}^n (d = 1) labelled by the product of q adjacent
/// coordinates starting at a seed-chosen offset; equal numbers of +1 and -1
/// labels (m must be even).
Dataset adjacent_parity_dataset(std::size_t n, std::size_t q, std::size_t m, std::uint64_t seed);

/// Example-1 task: adjacent_parity_dataset split 80/20 by the same seed.
DatasetSplit example1_split(std::size_t n, std::size_t q, std::size_t m, std::uint64_t seed);

/// m uniform points on (S^{d-1})^n (d >= 1; for d = 1 coordinates are +-1).
std::vector<InputPoint> random_points(std::size_t n, std::size_t d, std::size_t m, std::uint64_t seed);

/// Reads a labelled CSV: each row holds the point followed by its label.
/// A row of n*d + 1 values is taken as raw coordinates (each coordinate must
/// be a unit vector); with d = 2, a row of n + 1 values is read as scalars in
/// [-1, 1] and encoded onto the circle.
Dataset load_dataset(const std::string& path, std::size_t n, std::size_t d);

/// Reads an unlabelled point CSV under the same row rules (without the label).
std::vector<InputPoint> load_points(const std::string& path, std::size_t n, std::size_t d);

}  // namespace dualkern
