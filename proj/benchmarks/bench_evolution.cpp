#include <benchmark/benchmark.h>

#include "support/test_support.hpp"
#include "vgt/io.hpp"
#include "vgt/nsga2.hpp"
#include "vgt/operators.hpp"

namespace {

using namespace vgt;

void BM_SelectIndices(benchmark::State& state) {
  Rng rng(3);
  const int n = static_cast<int>(state.range(0));
  std::vector<RatingVector> r(static_cast<size_t>(n), RatingVector(4));
  for (auto& v : r) {
    for (double& x : v) x = uniform01(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(select_indices(r, n / 2));
}
BENCHMARK(BM_SelectIndices)->Arg(16)->Arg(64)->Arg(256);

void BM_InitializeAssignment(benchmark::State& state) {
  const TrussGraph t = io::load_truss(testing::data_path("table.json"));
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(initialize_assignment(t, rng));
}
BENCHMARK(BM_InitializeAssignment);

void BM_MutateAssignment(benchmark::State& state) {
  const TrussGraph t = io::load_truss(testing::data_path("table.json"));
  Rng rng(5);
  ChannelAssignment a = initialize_assignment(t, rng);
  for (auto _ : state) {
    a = mutate_assignment(t, a, rng);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_MutateAssignment);

}  // namespace
