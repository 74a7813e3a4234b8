#include "dualkern/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <nlohmann/json.hpp>
#include <ostream>
#include <thread>

#include "dualkern/csv.hpp"
#include "dualkern/error.hpp"
#include "dualkern/kernel.hpp"
#include "dualkern/network.hpp"
#include "dualkern/rng.hpp"

namespace dualkern {
namespace {

struct Task {
  std::size_t r_index;
  std::size_t trial;
};

void validate(const ConvergenceConfig& c) {
  if (c.r_values.empty()) throw InvalidArgument("convergence: empty r list");
  for (auto r : c.r_values) {
    if (r < 1) throw InvalidArgument("convergence: every r must be >= 1");
  }
  if (c.trials < 1) throw InvalidArgument("convergence: trials must be >= 1");
  if (c.pairs.empty()) throw InvalidArgument("convergence: no input pairs");
  if (!(c.epsilon > 0.0)) throw InvalidArgument("convergence: eps must be positive");
  if (!(c.beta >= 0.0 && c.beta <= 1.0)) throw InvalidArgument("convergence: beta must lie in [0, 1]");
}

}  // namespace

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * double(values.size() - 1);
  const auto lo = std::size_t(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - double(lo)) * (values[hi] - values[lo]);
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = double(n);
  const double p = double(k) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("loglog_slope: size mismatch");
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= double(x.size());
  my /= double(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<InputPair> all_pairs(const std::vector<InputPoint>& points) {
  std::vector<InputPair> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) out.emplace_back(points[i], points[j]);
  }
  return out;
}

ConvergenceReport run_convergence(const ConvergenceConfig& config) {
  validate(config);
  const CompositionalKernel kernel(config.skeleton.with_beta(config.beta), config.expansion);

  // Distinct points, and each pair as indices into them.
  std::vector<InputPoint> points;
  std::vector<std::pair<std::size_t, std::size_t>> index;
  auto locate = [&points](const InputPoint& p) {
    const auto it = std::find(points.begin(), points.end(), p);
    if (it != points.end()) return std::size_t(it - points.begin());
    points.push_back(p);
    return points.size() - 1;
  };
  for (const auto& [x, y] : config.pairs) {
    kernel.check_conformant(x);
    kernel.check_conformant(y);
    const std::size_t i = locate(x);
    const std::size_t j = locate(y);
    index.emplace_back(i, j);
  }
  std::vector<double> analytic;
  for (const auto& [x, y] : config.pairs) analytic.push_back(kernel(x, y));

  const std::size_t pairs = config.pairs.size();
  const std::size_t per_r = config.trials * pairs;
  ConvergenceReport report;
  report.rows.resize(config.r_values.size() * per_r);

  std::vector<Task> tasks;
  for (std::size_t ri = 0; ri < config.r_values.size(); ++ri) {
    for (std::size_t t = 0; t < config.trials; ++t) tasks.push_back({ri, t});
  }

  auto run_task = [&](const Task& task) {
    const std::size_t r = config.r_values[task.r_index];
    const std::uint64_t seed = derive_seed(config.seed, {r, task.trial});
    const Network net(config.skeleton, r, 0);
    Eigen::MatrixXd psi;
    if (config.sampler == Sampler::marginal) {
      psi = sample_representation(net, seed, config.beta, points);
    } else {
      psi = representation(net, init_weights(net, seed, config.beta), points);
    }
    const Eigen::MatrixXd k = psi.transpose() * psi;
    for (std::size_t p = 0; p < pairs; ++p) {
      auto& row = report.rows[task.r_index * per_r + task.trial * pairs + p];
      row.r = r;
      row.trial = task.trial;
      row.pair = p;
      row.empirical = k(Eigen::Index(index[p].first), Eigen::Index(index[p].second));
      row.analytic = analytic[p];
      row.abs_error = std::abs(row.empirical - row.analytic);
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, unsigned(tasks.size())));
  if (workers == 1) {
    for (const auto& t : tasks) run_task(t);
  } else {
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = w; i < tasks.size(); i += workers) run_task(tasks[i]);
          } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<double> rs, medians;
  for (std::size_t ri = 0; ri < config.r_values.size(); ++ri) {
    std::vector<double> errors;
    errors.reserve(per_r);
    for (std::size_t i = 0; i < per_r; ++i) errors.push_back(report.rows[ri * per_r + i].abs_error);
    ConvergenceSummary s;
    s.r = config.r_values[ri];
    s.samples = errors.size();
    s.median = quantile(errors, 0.5);
    s.p95 = quantile(errors, 0.95);
    double sum = 0.0;
    for (double e : errors) {
      sum += e;
      if (e > config.epsilon) ++s.failures;
    }
    s.mean = sum / double(errors.size());
    s.failure_rate = double(s.failures) / double(s.samples);
    std::tie(s.wilson_low, s.wilson_high) = wilson_interval(s.failures, s.samples);
    report.summaries.push_back(s);
    rs.push_back(double(s.r));
    medians.push_back(s.median);
  }
  bool positive = true;
  for (double m : medians) positive = positive && m > 0.0;
  report.slope = positive ? loglog_slope(rs, medians) : std::numeric_limits<double>::quiet_NaN();
  return report;
}

void write_convergence_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "r,trial,pair_id,kappa_emp,kappa_analytic,abs_err\n";
  for (const auto& row : report.rows) {
    out << row.r << ',' << row.trial << ',' << row.pair << ',' << format_double(row.empirical) << ','
        << format_double(row.analytic) << ',' << format_double(row.abs_error) << '\n';
  }
}

std::string convergence_summary_json(const ConvergenceReport& report, const ConvergenceConfig& config) {
  nlohmann::ordered_json j;
  j["skeleton_hash"] = config.skeleton.hash();
  j["seed"] = config.seed;
  j["beta"] = config.beta;
  j["epsilon"] = config.epsilon;
  j["trials"] = config.trials;
  j["pairs"] = config.pairs.size();
  j["sampler"] = config.sampler == Sampler::marginal ? "marginal" : "explicit";
  auto& rows = j["summary"] = nlohmann::ordered_json::array();
  for (const auto& s : report.summaries) {
    nlohmann::ordered_json e;
    e["r"] = s.r;
    e["median_abs_err"] = s.median;
    e["p95_abs_err"] = s.p95;
    e["mean_abs_err"] = s.mean;
    e["samples"] = s.samples;
    e["failures"] = s.failures;
    e["failure_rate"] = s.failure_rate;
    e["wilson95"] = {s.wilson_low, s.wilson_high};
    rows.push_back(e);
  }
  if (std::isfinite(report.slope)) {
    j["loglog_slope"] = report.slope;
  } else {
    j["loglog_slope"] = nullptr;
  }
  return j.dump(2) + "\n";
}

}  // namespace dualkern
