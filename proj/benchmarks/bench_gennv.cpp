#include <benchmark/benchmark.h>

#include "gennv/estimator.hpp"
#include "gennv/foc.hpp"
#include "gennv/polyroot.hpp"
#include "gennv/rng.hpp"

namespace {

void BM_Estimate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  const auto xs = gennv::sample(gennv::DemandModel::uniform(0, 1), n, 1);
  const auto cost = gennv::SeverityCost::from_ratio(m, 0.45);
  for (auto _ : state) benchmark::DoNotOptimize(gennv::estimate_optimal_q(xs, cost));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Estimate)->ArgsProduct({{100, 1000, 10000}, {2, 3, 10}})->Complexity();

void BM_RootsInInterval(benchmark::State& state) {
  gennv::Rng rng(3);
  std::vector<double> c(static_cast<std::size_t>(state.range(0)) + 1);
  for (auto& v : c) v = 2.0 * rng.uniform01() - 1.0;
  const gennv::Poly p(c);
  for (auto _ : state) benchmark::DoNotOptimize(gennv::roots_in_interval(p, -2.0, 2.0, 1e-12));
}
BENCHMARK(BM_RootsInInterval)->DenseRange(3, 9, 3);

void BM_PopulationSolve(benchmark::State& state) {
  const auto model = gennv::DemandModel::exponential(1);
  const auto cost = gennv::SeverityCost::from_ratio(static_cast<int>(state.range(0)), 0.65);
  for (auto _ : state) benchmark::DoNotOptimize(gennv::solve_population_foc(model, cost));
}
BENCHMARK(BM_PopulationSolve)->Arg(2)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
