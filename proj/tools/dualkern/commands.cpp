#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <thread>

#include "dualkern/activation.hpp"
#include "dualkern/approximation.hpp"
#include "dualkern/bounds.hpp"
#include "dualkern/convergence.hpp"
#include "dualkern/csv.hpp"
#include "dualkern/datasets.hpp"
#include "dualkern/dsl.hpp"
#include "dualkern/dual.hpp"
#include "dualkern/error.hpp"
#include "dualkern/kernel.hpp"
#include "dualkern/rng.hpp"
#include "dualkern/tower.hpp"
#include "output.hpp"

namespace dkcli {

namespace dk = dualkern;

namespace {

constexpr std::uint64_t default_points_stream = 20;

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

struct ActivationArgs {
  std::string kind;
  std::optional<double> a;
  std::optional<int> n;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--kind", kind, "identity | relu | step | exp | sin | hermite")->required();
    cmd->add_option("--a", a, "scale a for exp and sin (default 1)");
    cmd->add_option("--n", n, "degree n for hermite");
  }

  dk::Activation build() const {
    const auto k = dk::parse_activation_kind(kind);
    switch (k) {
      case dk::ActivationKind::exponential:
      case dk::ActivationKind::sine:
        return dk::make_activation(k, a.value_or(1.0));
      case dk::ActivationKind::hermite:
        if (!n) throw dk::InvalidArgument("--kind hermite needs --n");
        return dk::make_activation(k, double(*n));
      case dk::ActivationKind::custom:
        throw dk::InvalidArgument("custom activations are not available from the command line");
      default:
        return dk::make_activation(k);
    }
  }
};

std::vector<dk::InputPoint> distinct_random_points(std::size_t n, std::size_t d, std::size_t count, std::uint64_t seed) {
  const auto pool = dk::random_points(n, d, count * 8, seed);
  std::vector<dk::InputPoint> out;
  for (const auto& p : pool) {
    if (out.size() == count) break;
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

// duals

struct DualsArgs {
  ActivationArgs act;
  int degree = 50;
  int grid = 401;
  std::string grid_out;
  bool all = false;
  std::string out;
};

RunInfo run_duals(const DualsArgs& args) {
  dk::ExpansionOptions options;
  options.degree = args.degree;
  const auto sigma = args.act.build();
  const auto expansion = dk::hermite_expand(sigma, options);
  const auto dual = dk::dual_from_expansion(expansion);

  Output out(args.out);
  auto& os = out.stream();
  std::string param;
  if (sigma.kind() == dk::ActivationKind::exponential || sigma.kind() == dk::ActivationKind::sine ||
      sigma.kind() == dk::ActivationKind::hermite) {
    param = dk::format_double(sigma.param());
  }
  const std::string kind(dk::to_string(sigma.kind()));
  os << "kind,param,degree,a_i,b_i\n";
  for (std::size_t i = 0; i < expansion.coefficients.size(); ++i) {
    const double b = dual.coefficients()[i];
    if (!args.all && std::abs(b) <= 1e-15) continue;
    os << kind << ',' << param << ',' << i << ',' << dk::format_double(expansion.coefficients[i]) << ','
       << dk::format_double(b) << '\n';
  }
  out.close();

  if (!args.grid_out.empty()) {
    if (args.grid < 2) throw dk::InvalidArgument("--grid must be >= 2");
    Output grid(args.grid_out);
    auto& gs = grid.stream();
    gs << "rho,dual,series,closed\n";
    for (int g = 0; g < args.grid; ++g) {
      const double rho = -1.0 + 2.0 * double(g) / double(args.grid - 1);
      const auto closed = dual.closed(rho);
      gs << dk::format_double(rho) << ',' << dk::format_double(dual(rho)) << ',' << dk::format_double(dual.series(rho))
         << ',' << (closed ? dk::format_double(*closed) : std::string()) << '\n';
    }
    grid.close();
  }
  RunInfo info;
  info.out = args.out;
  return info;
}

// kernel / gram

struct KernelArgs {
  std::string skeleton;
  std::string inputs;
  std::string out;
  std::string format = "csv";
  unsigned threads = default_threads();
};

void write_dense(const Eigen::MatrixXd& m, std::ostream& os) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << dk::format_double(m(i, j));
    os << '\n';
  }
}

RunInfo run_kernel(const KernelArgs& args) {
  const auto skeleton = dk::load_skeleton(args.skeleton);
  const auto points = dk::load_points(args.inputs, skeleton.coordinate_count(), skeleton.coordinate_dim());
  if (points.empty()) throw dk::InvalidArgument("no input points in '" + args.inputs + "'");
  const dk::CompositionalKernel kernel(skeleton);
  Output out(args.out);
  if (points.size() == 2) {
    out.stream() << dk::format_double(kernel(points[0], points[1])) << '\n';
  } else {
    write_dense(dk::gram(kernel, points, args.threads).values, out.stream());
  }
  out.close();
  RunInfo info;
  info.out = args.out;
  info.skeleton_hash = skeleton.hash();
  return info;
}

RunInfo run_gram(const KernelArgs& args) {
  const auto skeleton = dk::load_skeleton(args.skeleton);
  const auto points = dk::load_points(args.inputs, skeleton.coordinate_count(), skeleton.coordinate_dim());
  if (points.empty()) throw dk::InvalidArgument("no input points in '" + args.inputs + "'");
  const auto g = dk::gram(skeleton, points, args.threads);
  if (args.format == "binary" && args.out.empty()) throw dk::InvalidArgument("--format binary needs --out");
  Output out(args.out);
  if (args.format == "csv") {
    dk::write_gram_csv(g, out.stream());
  } else if (args.format == "dense") {
    write_dense(g.values, out.stream());
  } else {
    dk::write_gram_binary(g, out.stream());
  }
  out.close();
  RunInfo info;
  info.out = args.out;
  info.skeleton_hash = skeleton.hash();
  return info;
}

// converge

struct ConvergeArgs {
  std::string skeleton;
  std::vector<std::size_t> r;
  std::size_t trials = 10;
  double eps = 0.1;
  std::optional<std::uint64_t> seed;
  double beta = 0.0;
  std::string points;
  std::size_t point_count = 5;
  std::string sampler = "marginal";
  std::string summary;
  std::string out;
  unsigned threads = default_threads();
};

RunInfo run_converge(const ConvergeArgs& args) {
  const auto skeleton = dk::load_skeleton(args.skeleton);
  const std::uint64_t seed = resolve_seed(args.seed);
  std::vector<dk::InputPoint> points;
  if (!args.points.empty()) {
    points = dk::load_points(args.points, skeleton.coordinate_count(), skeleton.coordinate_dim());
  } else {
    points = distinct_random_points(skeleton.coordinate_count(), skeleton.coordinate_dim(), args.point_count,
                                    dk::derive_seed(seed, {default_points_stream}));
  }
  if (points.size() < 2) throw dk::InvalidArgument("converge needs at least two input points");

  dk::ConvergenceConfig config{skeleton};
  config.r_values = args.r;
  config.trials = args.trials;
  config.pairs = dk::all_pairs(points);
  config.epsilon = args.eps;
  config.seed = seed;
  config.beta = args.beta;
  config.threads = args.threads;
  config.sampler = args.sampler == "explicit" ? dk::Sampler::explicit_weights : dk::Sampler::marginal;

  const auto report = dk::run_convergence(config);
  Output out(args.out);
  dk::write_convergence_csv(report, out.stream());
  out.close();

  std::string summary_path = args.summary;
  if (summary_path.empty() && !args.out.empty()) summary_path = args.out + ".summary.json";
  const auto summary = dk::convergence_summary_json(report, config);
  if (summary_path.empty()) {
    std::cerr << summary;
  } else {
    write_text_file(summary_path, summary);
  }

  RunInfo info;
  info.out = args.out;
  info.seed = seed;
  info.seed_given = args.seed.has_value();
  info.skeleton_hash = skeleton.hash();
  return info;
}

// tower

struct TowerArgs {
  ActivationArgs act;
  double rho = 0.0;
  int max_iter = 1'000'000;
  double tol = 1e-12;
  std::string out;
};

RunInfo run_tower(const TowerArgs& args) {
  const auto dual = dk::dual_of(args.act.build());
  const auto result = dk::tower_fixed_point(dual, args.tol, args.max_iter, args.rho);
  Output out(args.out);
  auto& os = out.stream();
  os << "m,alpha\n";
  for (std::size_t m = 0; m < result.trace.size(); ++m) os << m << ',' << dk::format_double(result.trace[m]) << '\n';
  out.close();
  std::cerr << (result.converged ? "converged" : "not converged") << " after " << result.iterations
            << " iterations; last iterate " << dk::format_double(result.value) << '\n';
  RunInfo info;
  info.out = args.out;
  info.exit_code = result.converged ? exit_ok : exit_nonconvergence;
  return info;
}

// learn

struct LearnArgs {
  std::vector<std::string> skeletons;
  std::string data;
  bool example1 = false;
  std::size_t m = 400;
  std::size_t q = 4;
  double test_fraction = 0.2;
  std::vector<std::size_t> r;
  double lambda = 1e-3;
  std::string loss = "squared";
  std::optional<std::uint64_t> seed;
  double beta = 0.0;
  std::string out;
  unsigned threads = default_threads();
};

RunInfo run_learn(const LearnArgs& args) {
  if (args.data.empty() == !args.example1) throw dk::InvalidArgument("give exactly one of --data and --example1");
  const std::uint64_t seed = resolve_seed(args.seed);
  std::vector<dk::Skeleton> skeletons;
  for (const auto& path : args.skeletons) skeletons.push_back(dk::load_skeleton(path));
  const auto& first = skeletons.front();
  for (const auto& s : skeletons) {
    if (s.coordinate_count() != first.coordinate_count() || s.coordinate_dim() != first.coordinate_dim()) {
      throw dk::ShapeError("all skeletons must share (n, d)");
    }
  }

  dk::Dataset data;
  if (args.example1) {
    if (first.coordinate_dim() != 1) throw dk::ShapeError("--example1 needs dim=1 skeletons");
    data = dk::adjacent_parity_dataset(first.coordinate_count(), args.q, args.m, seed);
  } else {
    data = dk::load_dataset(args.data, first.coordinate_count(), first.coordinate_dim());
  }
  const auto split = dk::split_dataset(data, 1.0 - args.test_fraction, seed);

  dk::ApproximationConfig config;
  config.r_values = args.r;
  config.lambda = args.lambda;
  config.loss = args.loss == "hinge" ? dk::Loss::hinge : dk::Loss::squared;
  config.seed = seed;
  config.beta = args.beta;
  config.threads = args.threads;

  std::vector<dk::ApproximationRow> rows;
  std::string hashes;
  for (std::size_t i = 0; i < skeletons.size(); ++i) {
    auto part = dk::approximation_experiment(skeletons[i], split, config);
    if (skeletons.size() > 1) {
      for (auto& row : part) row.space = stem(args.skeletons[i]) + ":" + row.space;
    }
    rows.insert(rows.end(), part.begin(), part.end());
    hashes += (i ? "," : "") + skeletons[i].hash();
  }
  Output out(args.out);
  dk::write_approximation_csv(rows, out.stream());
  out.close();

  RunInfo info;
  info.out = args.out;
  info.seed = seed;
  info.seed_given = args.seed.has_value();
  info.skeleton_hash = hashes;
  return info;
}

// bound

struct BoundArgs {
  std::string skeleton;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> size;
  std::string mode = "relu";
  double c = 1.0;
  double eps = 0.1;
  double delta = 0.01;
  std::string out;
};

RunInfo run_bound(const BoundArgs& args) {
  std::size_t depth = 0;
  std::size_t size = 0;
  RunInfo info;
  if (!args.skeleton.empty()) {
    const auto s = dk::load_skeleton(args.skeleton);
    depth = s.depth();
    size = s.size();
    info.skeleton_hash = s.hash();
  } else {
    if (!args.depth || !args.size) throw dk::InvalidArgument("give --skeleton or both --depth and --size");
    depth = *args.depth;
    size = *args.size;
  }
  const auto mode = args.mode == "c-bounded" ? dk::BoundMode::c_bounded : dk::BoundMode::relu;
  const auto result = dk::theorem_bound(depth, size, mode, args.c, args.eps, args.delta);
  Output out(args.out);
  auto& os = out.stream();
  os << "mode,depth,size,C,eps,delta,value,r,regime_ok\n";
  os << args.mode << ',' << depth << ',' << size << ',' << dk::format_double(args.c) << ',' << dk::format_double(args.eps)
     << ',' << dk::format_double(args.delta) << ',' << dk::format_double(result.value) << ',' << result.r << ','
     << (result.regime_ok ? "true" : "false") << '\n';
  out.close();
  if (mode == dk::BoundMode::relu) {
    std::cerr << "relu mode: universal constant taken as 1"
              << (result.regime_ok ? "" : "; warning: eps > 1/depth, outside the bound's regime") << '\n';
  }
  info.out = args.out;
  return info;
}

template <class Args>
void bind(CLI::App* cmd, std::shared_ptr<Args> args, RunInfo (*run)(const Args&), Runner& selected) {
  cmd->callback([args, run, &selected] { selected = [args, run] { return run(*args); }; });
}

}  // namespace

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("DUALKERN_SEED"); env && *env) {
    const long long v = dk::parse_integer(env);
    if (v < 0) throw dk::InvalidArgument("DUALKERN_SEED must be a non-negative integer");
    return std::uint64_t(v);
  }
  return 0;
}

void register_commands(CLI::App& app, Runner& selected) {
  const auto kinds = CLI::IsMember({"identity", "relu", "step", "exp", "sin", "hermite"});
  {
    auto args = std::make_shared<DualsArgs>();
    auto* cmd = app.add_subcommand("duals", "Hermite and dual coefficients of a catalog activation");
    args->act.add_to(cmd);
    cmd->get_option("--kind")->check(kinds);
    cmd->add_option("--degree", args->degree, "truncation degree N")->capture_default_str()->check(CLI::Range(0, 1000));
    cmd->add_option("--grid", args->grid, "rho-grid size for --grid-out")->capture_default_str();
    cmd->add_option("--grid-out", args->grid_out, "write rho,dual,series,closed on the grid");
    cmd->add_flag("--all", args->all, "also print coefficients with |b_i| <= 1e-15");
    cmd->add_option("--out", args->out, "output file (default stdout)");
    bind(cmd, args, &run_duals, selected);
  }
  for (const char* name : {"kernel", "gram"}) {
    auto args = std::make_shared<KernelArgs>();
    const bool is_gram = std::string(name) == "gram";
    auto* cmd = app.add_subcommand(name, is_gram ? "Gram matrix of a point set"
                                                 : "kernel value of a pair, or the dense Gram matrix of a point set");
    cmd->add_option("--skeleton", args->skeleton, ".skel file")->required();
    cmd->add_option("--inputs", args->inputs, "point CSV, one point per row")->required();
    cmd->add_option("--out", args->out, "output file (default stdout)");
    cmd->add_option("--threads", args->threads, "worker threads")->check(CLI::PositiveNumber);
    if (is_gram) {
      cmd->add_option("--format", args->format, "csv (row,col,value) | dense | binary")
          ->capture_default_str()
          ->check(CLI::IsMember({"csv", "dense", "binary"}));
    }
    bind(cmd, args, is_gram ? &run_gram : &run_kernel, selected);
  }
  {
    auto args = std::make_shared<ConvergeArgs>();
    auto* cmd = app.add_subcommand("converge", "Monte Carlo comparison of empirical and compositional kernels");
    cmd->add_option("--skeleton", args->skeleton, ".skel file")->required();
    cmd->add_option("--r", args->r, "replication list, e.g. 100,1000")->required()->delimiter(',')->check(CLI::PositiveNumber);
    cmd->add_option("--trials", args->trials, "trials per r")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--eps", args->eps, "failure threshold")->capture_default_str();
    cmd->add_option("--seed", args->seed, "master seed (fallback: DUALKERN_SEED, then 0)");
    cmd->add_option("--beta", args->beta, "bias parameter in [0, 1]")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--points", args->points, "point CSV; all pairs are evaluated");
    cmd->add_option("--point-count", args->point_count, "random points when --points is absent")->capture_default_str();
    cmd->add_option("--sampler", args->sampler, "marginal | explicit")
        ->capture_default_str()
        ->check(CLI::IsMember({"marginal", "explicit"}));
    cmd->add_option("--summary", args->summary, "summary JSON (default <out>.summary.json, else stderr)");
    cmd->add_option("--out", args->out, "CSV output file (default stdout)");
    cmd->add_option("--threads", args->threads, "worker threads")->check(CLI::PositiveNumber);
    bind(cmd, args, &run_converge, selected);
  }
  {
    auto args = std::make_shared<TowerArgs>();
    auto* cmd = app.add_subcommand("tower", "iterate a dual activation to its fixed point");
    args->act.add_to(cmd);
    cmd->get_option("--kind")->check(kinds);
    cmd->add_option("--rho", args->rho, "starting correlation in (-1, 1)")->required();
    cmd->add_option("--max-iter", args->max_iter, "iteration cap")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--tol", args->tol, "stop when successive iterates differ by less")->capture_default_str();
    cmd->add_option("--out", args->out, "output file (default stdout)");
    bind(cmd, args, &run_tower, selected);
  }
  {
    auto args = std::make_shared<LearnArgs>();
    auto* cmd = app.add_subcommand("learn", "analytic-kernel vs random-representation ridge comparison");
    cmd->add_option("--skeleton", args->skeletons, ".skel file (repeatable)")->required();
    cmd->add_option("--data", args->data, "labelled CSV: point values then label");
    cmd->add_flag("--example1", args->example1, "generate the adjacent-parity task instead of --data");
    cmd->add_option("--m", args->m, "--example1 sample count")->capture_default_str();
    cmd->add_option("--q", args->q, "--example1 window of the target")->capture_default_str();
    cmd->add_option("--test-fraction", args->test_fraction, "held-out share")
        ->capture_default_str()
        ->check(CLI::Range(0.01, 0.99));
    cmd->add_option("--r", args->r, "replication list; absent means analytic only")->delimiter(',')->check(CLI::PositiveNumber);
    cmd->add_option("--lambda", args->lambda, "ridge parameter")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--loss", args->loss, "squared | hinge")->capture_default_str()->check(CLI::IsMember({"squared", "hinge"}));
    cmd->add_option("--seed", args->seed, "master seed (fallback: DUALKERN_SEED, then 0)");
    cmd->add_option("--beta", args->beta, "bias parameter in [0, 1]")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--out", args->out, "CSV output file (default stdout)");
    cmd->add_option("--threads", args->threads, "worker threads")->check(CLI::PositiveNumber);
    bind(cmd, args, &run_learn, selected);
  }
  {
    auto args = std::make_shared<BoundArgs>();
    auto* cmd = app.add_subcommand("bound", "replication sufficient for eps-accurate kernels");
    cmd->add_option("--skeleton", args->skeleton, ".skel file (supplies depth and |S|)");
    cmd->add_option("--depth", args->depth, "skeleton depth");
    cmd->add_option("--size", args->size, "number of internal nodes |S|");
    cmd->add_option("--mode", args->mode, "c-bounded | relu")->capture_default_str()->check(CLI::IsMember({"c-bounded", "relu"}));
    cmd->add_option("--c", args->c, "activation bound C (c-bounded mode)")->capture_default_str();
    cmd->add_option("--eps", args->eps, "accuracy")->capture_default_str();
    cmd->add_option("--delta", args->delta, "failure probability")->capture_default_str();
    cmd->add_option("--out", args->out, "output file (default stdout)");
    bind(cmd, args, &run_bound, selected);
  }
}

}  // namespace dkcli
