#include <benchmark/benchmark.h>

#include <random>

#include "locsnn/model.hpp"

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

Model full_size_model() {
  ModelSpec spec;
  spec.hidden = 32;
  spec.seed = 3;
  return build_model(spec, 36, 78, 325);
}

void BM_HybridForward(benchmark::State& state) {
  Model model = full_size_model();
  SpikeTensor x = random_tensor(78, 325, 0.02, 5);
  for (auto _ : state) {
    SpikeTensor o = forward_hybrid(x, model);
    benchmark::DoNotOptimize(o);
  }
}
BENCHMARK(BM_HybridForward);

// One incremental streaming step, amortized over a whole sample.
void BM_StreamingSample(benchmark::State& state) {
  ModelSpec spec;
  spec.hidden = 16;
  spec.seed = 3;
  Model model = build_model(spec, 4, 16, 50);
  SpikeTensor x = random_tensor(16, 50, 0.05, 5);
  for (auto _ : state) {
    StreamingSession session(model, x);
    for (int t = 1; t <= 50; ++t) {
      TimestepOutput out = session.advance();
      benchmark::DoNotOptimize(out.prediction);
    }
  }
}
BENCHMARK(BM_StreamingSample);

}  // namespace

BENCHMARK_MAIN();
