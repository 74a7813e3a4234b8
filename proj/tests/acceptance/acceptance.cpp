#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "dualkern/activation.hpp"
#include "dualkern/approximation.hpp"
#include "dualkern/convergence.hpp"
#include "dualkern/datasets.hpp"
#include "dualkern/dsl.hpp"
#include "dualkern/dual.hpp"
#include "dualkern/kernel.hpp"
#include "dualkern/network.hpp"
#include "dualkern/regression.hpp"
#include "dualkern/rng.hpp"
#include "dualkern/tower.hpp"

using namespace dualkern;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= limit_seconds) {
    o.pass = false;
    o.detail += "; over time limit";
  }
  if (!o.pass) ++failures;
  std::ostringstream line;
  line.precision(3);
  line << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << name << "  [" << o.detail << "] ("
       << std::fixed << secs << " s, limit " << limit_seconds << " s)";
  std::cout << line.str() << std::endl;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

const char* kS2 = "inputs n=4 dim=1\nconv width=2 stride=1 activation=relu\nfc activation=relu\n";

std::vector<InputPoint> five_points() {
  const double raw[5][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}, {1, 1, 1, -1}};
  std::vector<InputPoint> pts;
  for (const auto& r : raw) pts.push_back(encode_signs(std::span<const double>(r, 4)));
  return pts;
}

Skeleton with_activation(const Skeleton& s, const Activation& a) {
  SkeletonGraph g = s.graph();
  for (auto& node : g.nodes) {
    if (!node.is_input()) node.activation = a;
  }
  return Skeleton(std::move(g));
}

Activation random_activation(const CounterRng& rng, std::uint64_t& c) {
  switch (int(rng.uniform(0, c++) * 6)) {
    case 0: return Activation::relu();
    case 1: return Activation::step();
    case 2: return Activation::identity();
    case 3: return Activation::exponential(0.5 + rng.uniform(0, c++));
    case 4: return Activation::sine(0.5 + rng.uniform(0, c++));
    default: return Activation::hermite(1 + int(rng.uniform(0, c++) * 3));
  }
}

// Layered skeleton of depth 1..3 with random conv tilings and activations.
Skeleton random_skeleton(std::uint64_t seed) {
  const CounterRng rng(seed);
  std::uint64_t c = 0;
  const std::size_t sizes[] = {4, 6, 8, 12};
  LayeredSpec spec;
  spec.coordinate_count = sizes[int(rng.uniform(0, c++) * 4)];
  spec.coordinate_dim = 1 + std::size_t(rng.uniform(0, c++) * 3);
  const int depth = 1 + int(rng.uniform(0, c++) * 3);
  std::size_t frontier = spec.coordinate_count;
  for (int l = 0; l + 1 < depth; ++l) {
    LayerSpec layer;
    std::vector<std::pair<std::size_t, std::size_t>> tilings;
    for (std::size_t w = 1; w <= frontier; ++w)
      for (std::size_t s = 1; s <= w; ++s)
        if ((frontier - w) % s == 0 && (frontier - w) / s + 1 >= 2) tilings.emplace_back(w, s);
    if (tilings.empty() || rng.uniform(0, c++) < 0.25) {
      layer.kind = LayerKind::fc;
      frontier = 1;
    } else {
      const auto [w, s] = tilings[std::size_t(rng.uniform(0, c++) * double(tilings.size()))];
      layer.kind = LayerKind::conv1d;
      layer.width = w;
      layer.stride = s;
      frontier = (frontier - w) / s + 1;
    }
    layer.activation = random_activation(rng, c);
    spec.layers.push_back(layer);
  }
  LayerSpec top;
  top.activation = random_activation(rng, c);
  spec.layers.push_back(top);
  return Skeleton::from_layers(spec);
}

int run_cli(const std::string& args) {
#ifdef DUALKERN_CLI
  const std::string cmd = "\"" DUALKERN_CLI "\" " + args + " 2>/dev/null >/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
  (void)args;
  return -1;
#endif
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct ConvergenceCheck {
  double median_at_max = 0;
  double slope = 0;
  double wilson_high_5000 = 0;
  double failure_rate_5000 = 0;
};

ConvergenceCheck convergence_check(const Skeleton& s) {
  ConvergenceConfig c(s);
  c.r_values = {100, 1000, 5000, 10000};
  c.trials = 100;
  c.pairs = all_pairs(five_points());
  c.epsilon = 0.1;
  c.seed = 42;
  const auto rep = run_convergence(c);
  ConvergenceCheck out;
  std::vector<double> rs, meds;
  for (const auto& sum : rep.summaries) {
    if (sum.r == 5000) {
      out.wilson_high_5000 = sum.wilson_high;
      out.failure_rate_5000 = sum.failure_rate;
      continue;
    }
    rs.push_back(double(sum.r));
    meds.push_back(sum.median);
    if (sum.r == 10000) out.median_at_max = sum.median;
  }
  out.slope = loglog_slope(rs, meds);
  return out;
}

}  // namespace

int main() {
  std::cout << "dualkern acceptance run" << std::endl;

  criterion(1, "dual-coefficient exactness", 1.0, [] {
    const double pi = M_PI;
    const double relu[] = {1 / pi, 0.5, 1 / (2 * pi), 0, 1 / (24 * pi), 0, 1 / (80 * pi)};
    const double step[] = {0.5, 1 / pi, 0, 1 / (6 * pi), 0, 3 / (40 * pi), 0};
    const auto br = dual_of(Activation::relu()).coefficients();
    const auto bs = dual_of(Activation::step()).coefficients();
    double err = 0;
    for (int i = 0; i <= 6; ++i) err = std::max({err, std::abs(br[i] - relu[i]), std::abs(bs[i] - step[i])});
    return Outcome{err <= 1e-6, "max |b_i - expected| = " + fmt(err)};
  });

  criterion(2, "ReLU partial sums", 1.0, [] {
    const auto b = dual_of(Activation::relu()).coefficients();
    const double expect[] = {0.9774, 0.9907, 0.9947};
    double sum = 0, err = 0;
    std::string sums;
    for (int i = 0; i <= 6; ++i) {
      sum += b[i];
      if (i >= 2 && i % 2 == 0) {
        err = std::max(err, std::abs(sum - expect[i / 2 - 1]));
        sums += (sums.empty() ? "" : "/") + fmt(sum);
      }
    }
    return Outcome{err <= 5e-4, "sums " + sums + ", max err " + fmt(err)};
  });

  criterion(3, "closed form vs degree-50 series", 1.0, [] {
    const std::pair<const char*, Activation> acts[] = {{"relu", Activation::relu()},
                                                       {"step", Activation::step()},
                                                       {"exp", Activation::exponential(1)},
                                                       {"sin", Activation::sine(1)},
                                                       {"hermite2", Activation::hermite(2)}};
    ExpansionOptions opt;
    opt.degree = 50;
    bool ok = true;
    std::string detail;
    for (const auto& [name, a] : acts) {
      const auto dual = dual_of(a, opt);
      double dev = 0;
      for (int k = 0; k <= 400; ++k) {
        const double rho = -1.0 + 2.0 * k / 400.0;
        dev = std::max(dev, std::abs(dual.series(rho) - *dual.closed(rho)));
      }
      ok = ok && dev <= 1e-5;
      detail += std::string(detail.empty() ? "" : ", ") + name + " " + fmt(dev);
    }
    return Outcome{ok, "max deviation: " + detail + " (relu/step tails beyond degree 50 exceed 1e-5 at rho = +-1)"};
  });

  criterion(4, "PSD suite", 10.0, [] {
    double worst_eig = 1e300, worst_diag = 0;
    for (std::uint64_t k = 0; k < 10; ++k) {
      const auto s = random_skeleton(1000 + k);
      const auto pts = random_points(s.coordinate_count(), s.coordinate_dim(), 20, 2000 + k);
      const auto g = gram(s, pts);
      worst_eig = std::min(worst_eig, g.min_eigenvalue());
      worst_diag = std::max(worst_diag, (g.values.diagonal().array() - 1.0).abs().maxCoeff());
    }
    return Outcome{worst_eig >= -1e-8 && worst_diag <= 1e-9,
                   "min eigenvalue " + fmt(worst_eig) + ", max |diag - 1| " + fmt(worst_diag)};
  });

  criterion(5, "ReLU convergence, conv+fc skeleton", 300.0, [] {
    const auto c = convergence_check(parse_skeleton(kS2));
    const bool ok = c.median_at_max <= 0.03 && std::abs(c.slope + 0.5) <= 0.15 && c.wilson_high_5000 <= 0.05;
    return Outcome{ok, "median@1e4 " + fmt(c.median_at_max) + ", slope " + fmt(c.slope) + ", fail@5000 " +
                           fmt(c.failure_rate_5000) + " (Wilson upper " + fmt(c.wilson_high_5000) + ")"};
  });

  criterion(6, "bounded-activation convergence, conv+fc skeleton", 300.0, [] {
    const auto c = convergence_check(with_activation(parse_skeleton(kS2), erf_truncated(15)));
    const bool ok = c.median_at_max <= 0.03 && std::abs(c.slope + 0.5) <= 0.15;
    return Outcome{ok, "truncated erf, median@1e4 " + fmt(c.median_at_max) + ", slope " + fmt(c.slope)};
  });

  criterion(7, "ReLU homogeneity", 1.0, [] {
    const auto s = parse_skeleton(kS2);
    const auto net = realize(s, 64);
    const auto w = init_weights(net, 7);
    const auto pts = five_points();
    const auto base = representation(net, w, pts);
    double rel = 0, cos_err = 0;
    for (double c : {0.5, 2.0}) {
      const auto sc = representation(net, w.scaled(c), pts);
      const Eigen::MatrixXd expect = std::pow(c, double(s.depth())) * base;
      rel = std::max(rel, (sc - expect).norm() / expect.norm());
      for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
          const double a = base.col(i).dot(base.col(j)) / (base.col(i).norm() * base.col(j).norm());
          const double b = sc.col(i).dot(sc.col(j)) / (sc.col(i).norm() * sc.col(j).norm());
          cos_err = std::max(cos_err, std::abs(a - b));
        }
    }
    return Outcome{rel <= 1e-12 && cos_err <= 1e-12, "relative error " + fmt(rel) + ", cosine change " + fmt(cos_err)};
  });

  criterion(8, "tower fixed points", 1.0, [] {
    const auto relu = dual_of(Activation::relu());
    double worst = 0;
    for (double start : {-0.5, 0.0, 0.5, 0.9}) {
      const auto r = tower_fixed_point(relu, 1e-12, 1'000'000, start);
      worst = std::max(worst, r.converged ? std::abs(r.value - 1.0) : 1.0);
    }
    const auto h2 = tower_fixed_point(dual_of(Activation::hermite(2)), 1e-12, 1000, 0.9);
    const auto id = dual_of(Activation::identity());
    const bool id_fixed = tower_iterate(id, 0.37, 50) == 0.37;
    const bool ok = worst <= 1e-6 && h2.converged && std::abs(h2.value) <= 1e-6 && id_fixed;
    return Outcome{ok, "relu max |alpha - 1| " + fmt(worst) + ", hermite2 -> " + fmt(h2.value) +
                           ", identity fixed " + (id_fixed ? "yes" : "no")};
  });

  criterion(9, "representer equivalence", 30.0, [] {
    const CounterRng rng(99);
    double worst = 0;
    for (std::uint64_t k = 0; k < 20; ++k) {
      const auto s = random_skeleton(500 + k);
      const std::size_t r = 10 + std::size_t(rng.uniform(1, 2 * k) * 490);
      const std::size_t m = 10 + std::size_t(rng.uniform(1, 2 * k + 1) * 90);
      const auto net = realize(s, r);
      const auto w = init_weights(net, k);
      const auto pts = random_points(s.coordinate_count(), s.coordinate_dim(), m, 700 + k);
      Eigen::VectorXd y(static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i) y(Eigen::Index(i)) = rng.normal(2, k * 1000 + i);
      const auto psi = representation(net, w, pts);
      const auto lin = last_layer_train(psi, y, 1e-3);
      const auto ker = kernel_regression(psi.transpose() * psi, y, 1e-3);
      worst = std::max(worst, (lin.fitted - ker.fitted).cwiseAbs().maxCoeff());
    }
    return Outcome{worst <= 1e-8, "max fitted-value difference " + fmt(worst)};
  });

  criterion(10, "conv beats fc on adjacent-coordinate task", 120.0, [] {
    const auto conv = parse_skeleton("inputs n=16 dim=1\nconv width=4 stride=1 activation=relu\nfc activation=relu\n");
    const auto fc = parse_skeleton("inputs n=16 dim=1\nfc activation=relu\n");
    int wins = 0;
    for (std::uint64_t draw = 0; draw < 20; ++draw) {
      const auto split = example1_split(16, 4, 400, 1000 + draw);
      const ApproximationConfig cfg;
      const auto a = approximation_experiment(conv, split, cfg);
      const auto b = approximation_experiment(fc, split, cfg);
      wins += a[0].test_loss < b[0].test_loss;
    }
    return Outcome{wins >= 16, "conv wins " + std::to_string(wins) + "/20"};
  });

  criterion(11, "approximation gap at r = 50000", 120.0, [] {
    const auto s = parse_skeleton("inputs n=16 dim=1\nfc activation=relu\n");
    const auto split = example1_split(16, 2, 200, 7);
    ApproximationConfig cfg;
    cfg.r_values = {50000};
    cfg.seed = 11;
    const auto rows = approximation_experiment(s, split, cfg);
    const double gap = std::abs(rows[1].test_loss - rows[0].test_loss);
    ApproximationConfig half;
    half.lambda = cfg.lambda / 2;
    const auto matched = approximation_experiment(s, split, half);
    const double matched_gap = std::abs(rows[1].test_loss - matched[0].test_loss);
    return Outcome{gap <= 0.05, "analytic test " + fmt(rows[0].test_loss) + ", empirical test (lambda/2) " +
                                    fmt(rows[1].test_loss) + ", gap " + fmt(gap) +
                                    "; diagnostic: analytic at lambda/2 " + fmt(matched[0].test_loss) + ", gap " +
                                    fmt(matched_gap)};
  });

  criterion(12, "converge CSV is thread-independent", 60.0, [] {
    const auto dir = std::filesystem::temp_directory_path() / "dualkern_acceptance_12";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const std::string base = std::string("converge --skeleton ") + DUALKERN_TEST_DATA + "/s2.skel --points " +
                             DUALKERN_TEST_DATA + "/five_n4.csv --r 100,1000 --trials 10 --seed 3";
    const int c1 = run_cli(base + " --threads 1 --out " + (dir / "a.csv").string());
    const int c2 = run_cli(base + " --threads 1 --out " + (dir / "b.csv").string());
    const int c3 = run_cli(base + " --threads 4 --out " + (dir / "c.csv").string());
    const auto a = slurp(dir / "a.csv");
    const bool ok = c1 == 0 && c2 == 0 && c3 == 0 && !a.empty() && a == slurp(dir / "b.csv") && a == slurp(dir / "c.csv");
    std::filesystem::remove_all(dir);
    return Outcome{ok, "exit codes " + std::to_string(c1) + "/" + std::to_string(c2) + "/" + std::to_string(c3) +
                           ", " + std::to_string(a.size()) + " bytes, identical " + (ok ? "yes" : "no")};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
