#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dualkern/dual.hpp"
#include "dualkern/encoding.hpp"
#include "dualkern/skeleton.hpp"

namespace dualkern {

enum class Sampler {
  /// sample_representation: exact law of Psi_w over the evaluated points.
  marginal,
  /// init_weights + representation on the materialized network.
  explicit_weights,
};

using InputPair = std::pair<InputPoint, InputPoint>;

struct ConvergenceConfig {
  explicit ConvergenceConfig(Skeleton s) : skeleton(std::move(s)) {}

  Skeleton skeleton;
  std::vector<std::size_t> r_values;
  std::size_t trials = 1;
  std::vector<InputPair> pairs;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  double beta = 0.0;
  unsigned threads = 1;
  Sampler sampler = Sampler::marginal;
  ExpansionOptions expansion;
};

struct ConvergenceRow {
  std::size_t r = 0;
  std::size_t trial = 0;
  std::size_t pair = 0;
  double empirical = 0.0;
  double analytic = 0.0;
  double abs_error = 0.0;
};

struct ConvergenceSummary {
  std::size_t r = 0;
  double median = 0.0;
  double p95 = 0.0;
  double mean = 0.0;
  std::size_t samples = 0;
  std::size_t failures = 0;
  double failure_rate = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::vector<ConvergenceSummary> summaries;
  /// Least-squares slope of log(median) against log(r); NaN with fewer than two r.
  double slope = 0.0;
};

/// For every r and trial, draws a network with seed derive_seed(seed, {r, trial})
/// and compares kappa_w with kappa_S on every pair. Trials are spread over
/// `threads` workers; the report does not depend on the thread count.
ConvergenceReport run_convergence(const ConvergenceConfig& config);

/// Header r,trial,pair_id,kappa_emp,kappa_analytic,abs_err; shortest round-trip doubles.
void write_convergence_csv(const ConvergenceReport& report, std::ostream& out);
std::string convergence_summary_json(const ConvergenceReport& report, const ConvergenceConfig& config);

/// Wilson score interval for k successes out of n at normal quantile z.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

/// Least-squares slope of log(y) on log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Linear-interpolated quantile of an unsorted sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Every unordered pair of distinct entries, (0,1), (0,2), ..., in order.
std::vector<InputPair> all_pairs(const std::vector<InputPoint>& points);

}  // namespace dualkern
