#include <benchmark/benchmark.h>

#include <random>

#include "locsnn/layer.hpp"

namespace {

using namespace locsnn;

SpikeTensor random_tensor(int channels, int steps, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SpikeTensor out(channels, steps);
  for (int c = 0; c < channels; ++c) {
    for (int s = 0; s < steps; ++s) {
      if (unit(rng) < density) out.set(c, s, true);
    }
  }
  return out;
}

// Full-size first layer: 78 taxels in, 32 out, 325 time bins.
void BM_ForwardScan(benchmark::State& state) {
  KernelConfig cfg;
  cfg.kernel_len = 8;
  DenseSpikingLayer layer(init_weights(78, 32, 1, 100.0), cfg);
  SpikeTensor input = random_tensor(78, 325, state.range(0) / 100.0, 7);
  for (auto _ : state) {
    ScanTrace trace = forward_scan(input, layer);
    benchmark::DoNotOptimize(trace.spikes);
  }
  state.SetLabel(std::to_string(state.range(0)) + "% density");
}
BENCHMARK(BM_ForwardScan)->Arg(1)->Arg(5)->Arg(20);

void BM_BackwardScan(benchmark::State& state) {
  KernelConfig cfg;
  cfg.kernel_len = 8;
  DenseSpikingLayer layer(init_weights(78, 32, 1, 100.0), cfg);
  SpikeTensor input = random_tensor(78, 325, 0.05, 7);
  ScanTrace trace = forward_scan(input, layer);
  Eigen::MatrixXd grad_out = Eigen::MatrixXd::Ones(32, 325);
  for (auto _ : state) {
    LayerGradients grads = backward_scan(trace, input, grad_out, layer);
    benchmark::DoNotOptimize(grads.weights);
  }
}
BENCHMARK(BM_BackwardScan);

}  // namespace
