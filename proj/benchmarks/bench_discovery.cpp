#include <benchmark/benchmark.h>

#include "convmine/discovery.hpp"
#include "convmine/model.hpp"

using namespace convmine;

namespace {

EventLog corpus(std::size_t traces, std::size_t max_len) {
    return generate_traces(builtin_qrfa(), traces, max_len, 11);
}

void BM_DirectlyFollows(benchmark::State& state) {
    auto log = corpus(static_cast<std::size_t>(state.range(0)), 24);
    for (auto _ : state) {
        benchmark::DoNotOptimize(directly_follows(log));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DirectlyFollows)->Arg(1000)->Arg(10000);

void BM_MineSuccession(benchmark::State& state) {
    auto log = corpus(static_cast<std::size_t>(state.range(0)), 24);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mine_succession(log));
    }
}
BENCHMARK(BM_MineSuccession)->Arg(1000)->Arg(5000);

void BM_MineEpisodes(benchmark::State& state) {
    auto log = corpus(static_cast<std::size_t>(state.range(0)), 24);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mine_episodes(log, 4, 1));
    }
}
BENCHMARK(BM_MineEpisodes)->Arg(1000)->Arg(5000);

void BM_GenerateTraces(benchmark::State& state) {
    auto def = builtin_qrfa();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            generate_traces(def, static_cast<std::size_t>(state.range(0)), 24, 3));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateTraces)->Arg(1000)->Arg(10000);

} // namespace
