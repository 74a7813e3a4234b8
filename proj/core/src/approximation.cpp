#include "dualkern/approximation.hpp"

#include <ostream>

#include "dualkern/csv.hpp"
#include "dualkern/error.hpp"
#include "dualkern/kernel.hpp"
#include "dualkern/network.hpp"
#include "dualkern/regression.hpp"
#include "dualkern/rng.hpp"

namespace dualkern {
namespace {

struct Fit {
  double train;
  double test;
};

double loss_of(Loss loss, const Eigen::VectorXd& f, const Eigen::VectorXd& y) {
  return loss == Loss::squared ? squared_loss(f, y) : hinge_loss(f, y);
}

/// Learns on the train block of a joint Gram (train first) and scores both blocks.
Fit fit_gram(const Eigen::MatrixXd& joint, Eigen::Index m, const DatasetSplit& data, double lambda, Loss loss) {
  const Eigen::MatrixXd train = joint.topLeftCorner(m, m);
  const auto result = loss == Loss::squared ? kernel_regression(train, data.train.labels, lambda)
                                            : kernel_svm(train, data.train.labels, lambda);
  Fit out;
  out.train = loss_of(loss, result.fitted, data.train.labels);
  if (data.test.size() > 0) {
    const Eigen::VectorXd f = joint.bottomLeftCorner(joint.rows() - m, m) * result.alpha;
    out.test = loss_of(loss, f, data.test.labels);
  } else {
    out.test = 0.0;
  }
  return out;
}

}  // namespace

std::vector<ApproximationRow> approximation_experiment(const Skeleton& skeleton, const DatasetSplit& data,
                                                       const ApproximationConfig& config) {
  if (data.train.size() == 0) throw InvalidArgument("approximation: empty training set");
  if (!(config.lambda > 0.0)) throw InvalidArgument("approximation: lambda must be positive");
  std::vector<InputPoint> points = data.train.points;
  points.insert(points.end(), data.test.points.begin(), data.test.points.end());
  const auto m = Eigen::Index(data.train.size());

  std::vector<ApproximationRow> rows;
  const CompositionalKernel kernel(skeleton.with_beta(config.beta), config.expansion);
  const auto analytic = gram(kernel, points, config.threads);
  const Fit a = fit_gram(analytic.values, m, data, config.lambda, config.loss);
  rows.push_back({std::nullopt, "analytic", a.train, a.test});

  for (std::size_t r : config.r_values) {
    const Network net(skeleton, r, 0);
    const std::uint64_t seed = derive_seed(config.seed, {r});
    Eigen::MatrixXd psi;
    if (net.edge_count() <= config.max_explicit_edges) {
      psi = representation(net, init_weights(net, seed, config.beta), points);
    } else {
      psi = sample_representation(net, seed, config.beta, points);
    }
    Fit e;
    if (config.loss == Loss::squared) {
      const auto model = last_layer_train(psi.leftCols(m), data.train.labels, config.lambda / 2.0);
      e.train = squared_loss(model.fitted, data.train.labels);
      e.test = data.test.size() > 0 ? squared_loss(psi.rightCols(psi.cols() - m).transpose() * model.v, data.test.labels)
                                    : 0.0;
    } else {
      e = fit_gram(psi.transpose() * psi, m, data, config.lambda / 2.0, config.loss);
    }
    rows.push_back({r, "empirical", e.train, e.test});
  }
  return rows;
}

void write_approximation_csv(const std::vector<ApproximationRow>& rows, std::ostream& out) {
  out << "r,space,train_loss,test_loss\n";
  for (const auto& row : rows) {
    out << (row.r ? std::to_string(*row.r) : std::string("inf")) << ',' << row.space << ','
        << format_double(row.train_loss) << ',' << format_double(row.test_loss) << '\n';
  }
}

}  // namespace dualkern
