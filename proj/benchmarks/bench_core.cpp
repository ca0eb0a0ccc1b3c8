#include <benchmark/benchmark.h>

#include <cmath>

#include "hktaylor/bounds.hpp"
#include "hktaylor/corpus.hpp"
#include "hktaylor/norms.hpp"
#include "hktaylor/quadrature.hpp"
#include "hktaylor/sweep.hpp"

using namespace hktaylor;

namespace {

const Interval kUnit{0.0, 1.0};

void BM_IntegrateSmooth(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate([](double x) { return std::exp(x) * std::sin(7.0 * x); }, kUnit, {}, 1e-12));
  }
}
BENCHMARK(BM_IntegrateSmooth);

void BM_IntegrateEndpointSingularity(benchmark::State& state) {
  const auto sing = SingularitySpec::left(0.0, SingularityKind::unbounded);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate([](double x) { return 1.0 / std::sqrt(x); }, kUnit, sing, 1e-10));
  }
}
BENCHMARK(BM_IntegrateEndpointSingularity);

void BM_AlexiewiczNorm(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(alexiewicz_norm([](double x) { return std::cos(9.0 * x); }, kUnit, {}, 1e-10));
  }
}
BENCHMARK(BM_AlexiewiczNorm);

void BM_LpNorm(benchmark::State& state) {
  const double p = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp_norm([](double x) { return x * x * x - 1.5 * x * x; }, kUnit, p, 1e-10));
  }
}
BENCHMARK(BM_LpNorm)->Arg(1)->Arg(2)->Arg(4);

void BM_Thm3AlexiewiczCell(benchmark::State& state) {
  const Func f = registry_lookup("exp");
  for (auto _ : state) benchmark::DoNotOptimize(bound_thm3_alexiewicz(f, kUnit, static_cast<int>(state.range(0)), 1e-9));
}
BENCHMARK(BM_Thm3AlexiewiczCell)->DenseRange(1, 3);

void BM_Thm4WeierstrassCell(benchmark::State& state) {
  const Func f = registry_lookup("weier");
  for (auto _ : state) benchmark::DoNotOptimize(bound_thm4(f, kUnit, 2, 1e-9));
}
BENCHMARK(BM_Thm4WeierstrassCell)->Unit(benchmark::kMillisecond);

void BM_SmallSweep(benchmark::State& state) {
  SweepConfig cfg;
  cfg.function_labels = {"poly:k=3", "sin", "kink"};
  cfg.n_values = {1, 2};
  cfg.x_samples = 2;
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg));
}
BENCHMARK(BM_SmallSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
