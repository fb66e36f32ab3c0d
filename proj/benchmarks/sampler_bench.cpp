#include <benchmark/benchmark.h>

#include <random>

#include "adpi/sampler.hpp"

namespace {

void BM_SamplerStep(benchmark::State& state) {
  adpi::AdaptiveSampler sampler(adpi::SamplerConfig{});
  std::mt19937_64 rng(5);
  for (auto _ : state) {
    const int w = sampler.current_window();
    benchmark::DoNotOptimize(sampler.step(static_cast<int>(rng() % (w + 1))));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SamplerStep);

}  // namespace
