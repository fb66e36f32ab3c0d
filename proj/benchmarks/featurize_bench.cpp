#include <benchmark/benchmark.h>

#include <random>

#include "adpi/synthetic.hpp"
#include "adpi/text_features.hpp"

namespace {

std::vector<std::string> payloads(std::size_t n) {
  std::vector<std::string> out;
  for (const auto& s : adpi::synth::payload_corpus(n, 0.3, 11)) out.push_back(s.payload);
  return out;
}

void BM_FitFeaturizer(benchmark::State& state) {
  const auto corpus = payloads(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(adpi::PayloadFeaturizer::fit(corpus));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitFeaturizer)->Arg(100)->Arg(1000);

void BM_Featurize(benchmark::State& state) {
  const auto corpus = payloads(1000);
  const auto featurizer = adpi::PayloadFeaturizer::fit(corpus);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(featurizer.featurize(corpus[i++ % corpus.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Featurize);

}  // namespace
