// Serial reference against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "sndflow/datasets.hpp"
#include "sndflow/flow.hpp"
#include "sndflow/kernels.hpp"
#include "sndflow/mmd.hpp"
#include "sndflow/slicing.hpp"

using namespace sndflow;

namespace {

const RadialProfile& snd() {
  static const RadialProfile p = RadialProfile::snd(2, 0.01, 3);
  return p;
}

void BM_FlowStepSerial(benchmark::State& state) {
  const ParticleCloud target = gen_three_rings(static_cast<int>(state.range(0)));
  const ParticleCloud x = gen_init_gaussian(static_cast<int>(target.size()), 2, 0.5, 1);
  ParticleCloud out;
  for (auto _ : state) {
    flow_step_reference<double>(snd(), x, target, 0.01, out);
    benchmark::DoNotOptimize(out.coords().data());
  }
}

void BM_FlowStepOpenMP(benchmark::State& state) {
  const ParticleCloud target = gen_three_rings(static_cast<int>(state.range(0)));
  const ParticleCloud x = gen_init_gaussian(static_cast<int>(target.size()), 2, 0.5, 1);
  ParticleCloud out;
  for (auto _ : state) {
    flow_step<double>(snd(), x, target, 0.01, out);
    benchmark::DoNotOptimize(out.coords().data());
  }
}

void BM_FlowStepFloat(benchmark::State& state) {
  const auto target = gen_three_rings(static_cast<int>(state.range(0))).cast<float>();
  const auto x = gen_init_gaussian(static_cast<int>(target.size()), 2, 0.5, 1).cast<float>();
  BasicCloud<float> out;
  for (auto _ : state) {
    flow_step<float>(snd(), x, target, 0.01f, out);
    benchmark::DoNotOptimize(out.coords().data());
  }
}

void BM_MmdSerial(benchmark::State& state) {
  const Kernel k(snd());
  const ParticleCloud a = gen_three_rings(static_cast<int>(state.range(0)));
  const ParticleCloud b = gen_init_gaussian(static_cast<int>(a.size()), 2, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(mmd_squared_reference(k, a, b));
}

void BM_MmdOpenMP(benchmark::State& state) {
  const Kernel k(snd());
  const ParticleCloud a = gen_three_rings(static_cast<int>(state.range(0)));
  const ParticleCloud b = gen_init_gaussian(static_cast<int>(a.size()), 2, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(mmd_squared(k, a, b));
}

std::vector<double> sorted_normals(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  std::sort(v.begin(), v.end());
  return v;
}

void BM_OnedSorted(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto xs = sorted_normals(n, 1), ys = sorted_normals(n, 2);
  const std::vector<double> w(n, 1.0 / static_cast<double>(n));
  const auto f = SlicedDerivative::abs(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(onedsum_sorted(xs, w, ys, f));
  state.SetComplexityN(state.range(0));
}

void BM_OnedDense(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto xs = sorted_normals(n, 1), ys = sorted_normals(n, 2);
  const std::vector<double> w(n, 1.0 / static_cast<double>(n));
  const auto f = SlicedDerivative::abs(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(onedsum_dense(xs, w, ys, f));
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_FlowStepSerial)->Arg(40)->Arg(200);
BENCHMARK(BM_FlowStepOpenMP)->Arg(40)->Arg(200);
BENCHMARK(BM_FlowStepFloat)->Arg(40)->Arg(200);
BENCHMARK(BM_MmdSerial)->Arg(40)->Arg(200);
BENCHMARK(BM_MmdOpenMP)->Arg(40)->Arg(200);
BENCHMARK(BM_OnedSorted)->RangeMultiplier(4)->Range(256, 1 << 16)->Complexity(benchmark::oNLogN);
BENCHMARK(BM_OnedDense)->RangeMultiplier(4)->Range(256, 1 << 12)->Complexity(benchmark::oNSquared);

BENCHMARK_MAIN();
