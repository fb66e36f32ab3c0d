#include <benchmark/benchmark.h>

#include "adpi/engine.hpp"
#include "adpi/synthetic.hpp"
#include "adpi/training.hpp"

namespace {

void BM_Replay(benchmark::State& state) {
  const auto corpus = adpi::synth::payload_corpus(400, 0.3, 31);
  adpi::ml::LogisticHyper h;
  h.lambda = 0.1;
  const auto model = adpi::train_payload_model(corpus, h);
  const int flows = static_cast<int>(state.range(0));
  const auto scenario = adpi::synth::replay_scenario(flows, 300, flows / 5, flows / 5, 3, 32);
  const auto blacklist = adpi::load_blacklist(scenario.blacklist_lines).blacklist;
  for (auto _ : state) {
    adpi::Engine engine(adpi::EngineConfig{}, blacklist, model);
    benchmark::DoNotOptimize(adpi::run_replay(engine, scenario.packets, {}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(scenario.packets.size()));
}
BENCHMARK(BM_Replay)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
