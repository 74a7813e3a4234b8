#include <benchmark/benchmark.h>

#include "dualkern/datasets.hpp"
#include "dualkern/dsl.hpp"
#include "dualkern/dual.hpp"
#include "dualkern/kernel.hpp"
#include "dualkern/network.hpp"

using namespace dualkern;

namespace {

const char* kConv = "inputs n=16 dim=1\nconv width=4 stride=1 activation=relu\nfc activation=relu\n";

void BM_HermiteExpand(benchmark::State& state) {
  ExpansionOptions opt;
  opt.degree = int(state.range(0));
  const auto a = Activation::exponential(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(hermite_expand(a, opt));
}
BENCHMARK(BM_HermiteExpand)->Arg(10)->Arg(50)->Arg(200);

void BM_Gram(benchmark::State& state) {
  const CompositionalKernel k(parse_skeleton(kConv));
  const auto pts = random_points(16, 1, std::size_t(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(gram(k, pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gram)->Arg(50)->Arg(200)->Complexity(benchmark::oNSquared);

void BM_SampleRepresentation(benchmark::State& state) {
  const auto net = realize(parse_skeleton(kConv), std::size_t(state.range(0)));
  const auto pts = random_points(16, 1, 10, 2);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_representation(net, seed++, 0.0, pts));
}
BENCHMARK(BM_SampleRepresentation)->Arg(100)->Arg(1000)->Arg(10000);

void BM_Forward(benchmark::State& state) {
  const auto net = realize(parse_skeleton(kConv), std::size_t(state.range(0)), 1);
  const auto w = init_weights(net, 3);
  const auto pts = random_points(16, 1, 64, 4);
  for (auto _ : state) benchmark::DoNotOptimize(forward(net, w, pts));
}
BENCHMARK(BM_Forward)->Arg(16)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
