#include <benchmark/benchmark.h>

#include <cmath>

#include "vgt/mlp.hpp"

namespace {

using namespace vgt;

Mlp network() {
  Mlp m({123, 64, 64, 8});
  Rng rng(6);
  m.orthogonal_init(rng, std::sqrt(2.0), 0.01);
  return m;
}

void BM_MlpForward(benchmark::State& state) {
  const Mlp m = network();
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(123, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(m.forward(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForward)->Arg(1)->Arg(64);

void BM_MlpBackward(benchmark::State& state) {
  const Mlp m = network();
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(123, state.range(0));
  const Eigen::MatrixXd g = Eigen::MatrixXd::Random(8, state.range(0));
  for (auto _ : state) {
    Mlp::Tape tape;
    m.forward(x, tape);
    benchmark::DoNotOptimize(m.backward(tape, g));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpBackward)->Arg(64);

}  // namespace
