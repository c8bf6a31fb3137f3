#include <benchmark/benchmark.h>

#include "convmine/conformance.hpp"
#include "convmine/model.hpp"

using namespace convmine;

namespace {

Trace repeated_trace(std::size_t length) {
    // a Q/A ping-pong with a misfit event every 16 steps
    Trace trace;
    trace.conversation_id = "bench";
    for (std::size_t i = 0; i < length; ++i) {
        if (i % 16 == 15) {
            trace.events.push_back(EventClass::named("X"));
        } else {
            trace.events.push_back(EventClass::named(i % 2 == 0 ? "Q" : "A"));
        }
    }
    return trace;
}

void BM_OptimalAlignmentCost(benchmark::State& state) {
    auto net = from_definition(builtin_qrfa());
    auto trace = repeated_trace(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_alignment_cost(trace, net));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OptimalAlignmentCost)->Arg(8)->Arg(32)->Arg(128)->Arg(512);

void BM_OptimalAlignmentMoves(benchmark::State& state) {
    auto net = from_definition(builtin_qrfa());
    auto trace = repeated_trace(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_alignment(trace, net));
    }
}
BENCHMARK(BM_OptimalAlignmentMoves)->Arg(32)->Arg(128);

void BM_LogFitness(benchmark::State& state) {
    auto def = builtin_qrfa();
    auto net = from_definition(def);
    auto log = generate_traces(def, static_cast<std::size_t>(state.range(0)), 48, 7);
    LogFitnessOptions options;
    options.threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_fitness(log, net, options));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogFitness)->Args({1000, 1})->Args({1000, 2})->Args({10000, 1})->Args({10000, 2});

void BM_WorstCaseCost(benchmark::State& state) {
    auto net = from_definition(builtin_qrfa());
    auto trace = repeated_trace(64);
    for (auto _ : state) {
        benchmark::DoNotOptimize(worst_case_cost(trace, net));
    }
}
BENCHMARK(BM_WorstCaseCost);

} // namespace
