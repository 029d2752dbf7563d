#include <benchmark/benchmark.h>

#include "support/test_support.hpp"
#include "vgt/evolution.hpp"
#include "vgt/io.hpp"
#include "vgt/observation.hpp"
#include "vgt/operators.hpp"
#include "vgt/sim.hpp"

namespace {

using namespace vgt;

const TrussGraph& table() {
  static const TrussGraph t = io::load_truss(testing::data_path("table.json"));
  return t;
}

void BM_SimStep(benchmark::State& state) {
  const Simulator sim(table(), PhysicsConfig{});
  Rng rng(1);
  const ChannelAssignment a = initialize_assignment(table(), rng);
  SimState s = sim.settle();
  s.channel_states.assign(s.channel_states.size(), true);
  for (auto _ : state) {
    s = sim.step(a, s);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimStep);

void BM_GenomeRating(benchmark::State& state) {
  std::vector<ObjectiveSpec> objectives = {{"fwd", ObjectiveKind::kMoveForward}, {"low", ObjectiveKind::kLower}};
  const GenomeEvaluator evaluate(table(), objectives, PhysicsConfig{});
  Rng rng(2);
  const Genome g = random_genome(table(), static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(g));
}
BENCHMARK(BM_GenomeRating)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Observe(benchmark::State& state) {
  const Simulator sim(table(), PhysicsConfig{});
  const SimState s = sim.settle();
  for (auto _ : state) benchmark::DoNotOptimize(observe(table(), s));
}
BENCHMARK(BM_Observe);

}  // namespace
