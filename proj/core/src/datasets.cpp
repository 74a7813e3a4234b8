#include "dualkern/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dualkern/csv.hpp"
#include "dualkern/error.hpp"
#include "dualkern/rng.hpp"

namespace dualkern {
namespace {

constexpr std::uint64_t shuffle_stream = 10;
constexpr std::uint64_t point_stream = 11;
constexpr std::uint64_t offset_stream = 12;

std::uint64_t bounded(const CounterRng& rng, std::uint64_t stream, std::uint64_t counter, std::uint64_t bound) {
  return std::min(bound - 1, std::uint64_t(rng.uniform(stream, counter) * double(bound)));
}

InputPoint row_to_point(std::span<const double> row, std::size_t n, std::size_t d, std::size_t line) {
  if (row.size() == n * d) return InputPoint(n, d, std::vector<double>(row.begin(), row.end()));
  if (d == 2 && row.size() == n) {
    for (double v : row) {
      if (!(v >= -1.0 && v <= 1.0)) throw ShapeError("row " + std::to_string(line) + ": scalar outside [-1, 1]");
    }
    return encode_scalars(row);
  }
  throw ShapeError("row " + std::to_string(line) + ": expected " + std::to_string(n * d) + " values per point, got " +
                   std::to_string(row.size()));
}

}  // namespace

DatasetSplit split_dataset(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw InvalidArgument("train fraction must lie in (0, 1)");
  if (std::size_t(data.labels.size()) != data.points.size()) throw ShapeError("dataset labels and points differ in count");
  const std::size_t m = data.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  const CounterRng rng(derive_seed(seed, {shuffle_stream}));
  for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[bounded(rng, 0, i, i)]);

  const auto train_count = std::size_t(std::llround(train_fraction * double(m)));
  DatasetSplit out;
  out.train.labels.resize(Eigen::Index(train_count));
  out.test.labels.resize(Eigen::Index(m - train_count));
  for (std::size_t i = 0; i < m; ++i) {
    auto& part = i < train_count ? out.train : out.test;
    const auto j = Eigen::Index(i < train_count ? i : i - train_count);
    part.points.push_back(data.points[order[i]]);
    part.labels[j] = data.labels[Eigen::Index(order[i])];
  }
  return out;
}

Dataset adjacent_parity_dataset(std::size_t n, std::size_t q, std::size_t m, std::uint64_t seed) {
  if (q < 1 || q > n) throw InvalidArgument("need 1 <= q <= n");
  if (m % 2 != 0) throw InvalidArgument("balanced labels need an even m");
  const CounterRng rng(seed);
  const std::size_t start = bounded(rng, offset_stream, 0, n - q + 1);

  Dataset out;
  out.labels.resize(Eigen::Index(m));
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::vector<double> x(n);
  for (std::uint64_t draw = 0; out.points.size() < m; ++draw) {
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(point_stream, draw * n + i) < 0.5 ? -1.0 : 1.0;
    double label = 1.0;
    for (std::size_t i = start; i < start + q; ++i) label *= x[i];
    auto& count = label > 0 ? positive : negative;
    if (count == m / 2) continue;
    ++count;
    out.labels[Eigen::Index(out.points.size())] = label;
    out.points.push_back(encode_signs(x));
  }
  return out;
}

DatasetSplit example1_split(std::size_t n, std::size_t q, std::size_t m, std::uint64_t seed) {
  return split_dataset(adjacent_parity_dataset(n, q, m, seed), 0.8, seed);
}

std::vector<InputPoint> random_points(std::size_t n, std::size_t d, std::size_t m, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InvalidArgument("random_points: n and d must be >= 1");
  const CounterRng rng(seed);
  std::vector<InputPoint> out;
  out.reserve(m);
  std::vector<double> v(n * d);
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t i = 0; i < n; ++i) {
      double norm = 0.0;
      do {
        norm = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const std::uint64_t counter = (std::uint64_t(p) * n + i) * d + j;
          v[i * d + j] = rng.normal(point_stream, counter);
          norm += v[i * d + j] * v[i * d + j];
        }
      } while (norm == 0.0);
      norm = std::sqrt(norm);
      for (std::size_t j = 0; j < d; ++j) v[i * d + j] /= norm;
    }
    out.emplace_back(n, d, v);
  }
  return out;
}

Dataset load_dataset(const std::string& path, std::size_t n, std::size_t d) {
  const auto rows = read_numeric_csv(path);
  Dataset out;
  out.labels.resize(Eigen::Index(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].empty()) throw ShapeError("row " + std::to_string(i + 1) + ": empty");
    const std::span<const double> row(rows[i]);
    out.points.push_back(row_to_point(row.first(row.size() - 1), n, d, i + 1));
    out.labels[Eigen::Index(i)] = row.back();
  }
  return out;
}

std::vector<InputPoint> load_points(const std::string& path, std::size_t n, std::size_t d) {
  const auto rows = read_numeric_csv(path);
  std::vector<InputPoint> out;
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back(row_to_point(rows[i], n, d, i + 1));
  return out;
}

}  // namespace dualkern
