#include <benchmark/benchmark.h>

#include <string>

#include "ipt/logic.hpp"

using namespace ipt::logic;

namespace {

// Transitive closure over a chain of n nodes.
Program chain(int n) {
    std::string text = "path(X,Y) :- edge(X,Y).\npath(X,Z) :- edge(X,Y), path(Y,Z).\n";
    for (int i = 0; i + 1 < n; ++i) text += "edge(n" + std::to_string(i) + ",n" + std::to_string(i + 1) + ").\n";
    return parse_program(text);
}

} // namespace

static void bm_least_model_chain(benchmark::State& state) {
    const auto p = chain(static_cast<int>(state.range(0)));
    EvalBudget budget;
    budget.max_iterations = 10000;
    std::size_t atoms = 0;
    for (auto _ : state) {
        auto m = least_model(p, budget);
        atoms = m.size();
        benchmark::DoNotOptimize(m);
    }
    state.counters["atoms"] = static_cast<double>(atoms);
}
BENCHMARK(bm_least_model_chain)->Arg(16)->Arg(64)->Arg(128);

static void bm_parse_program(benchmark::State& state) {
    const auto text = print_program(chain(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(parse_program(text));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(bm_parse_program)->Arg(100)->Arg(1000);
