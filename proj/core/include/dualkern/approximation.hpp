#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dualkern/datasets.hpp"
#include "dualkern/dual.hpp"
#include "dualkern/skeleton.hpp"

namespace dualkern {

enum class Loss { squared, hinge };

struct ApproximationConfig {
  /// Empty: analytic kernel only.
  std::vector<std::size_t> r_values;
  double lambda = 1e-3;
  Loss loss = Loss::squared;
  std::uint64_t seed = 0;
  double beta = 0.0;
  unsigned threads = 1;
  ExpansionOptions expansion;
  /// Networks with more edges than this are drawn with the marginal sampler
  /// over train and test points jointly instead of materialized weights.
  std::uint64_t max_explicit_edges = 50'000'000;
};

struct ApproximationRow {
  /// nullopt for the analytic kernel (r = infinity).
  std::optional<std::size_t> r;
  std::string space;
  double train_loss = 0.0;
  double test_loss = 0.0;
};

/// One analytic row (ridge / SVM on kappa_S with lambda), then one row per r
/// with the same learner over Psi_w from seed derive_seed(seed, {r}) and
/// lambda / 2 (twice the squared-norm budget).
std::vector<ApproximationRow> approximation_experiment(const Skeleton& skeleton, const DatasetSplit& data,
                                                       const ApproximationConfig& config);

/// Header r,space,train_loss,test_loss; the analytic row has r = inf.
void write_approximation_csv(const std::vector<ApproximationRow>& rows, std::ostream& out);

}  // namespace dualkern
