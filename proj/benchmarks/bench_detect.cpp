#include <benchmark/benchmark.h>

#include "ipt/detect.hpp"
#include "ipt/oracle.hpp"

using namespace ipt;

static void bm_classify_ground_truth(benchmark::State& state) {
    const auto g = tasks::generate_task(static_cast<int>(state.range(0)), 1);
    const auto h = logic::print_clause(g.ground_truth);
    for (auto _ : state) benchmark::DoNotOptimize(detect::classify(g.task, h));
}
BENCHMARK(bm_classify_ground_truth)->Arg(1)->Arg(10)->Arg(20);

static void bm_classify_blatant(benchmark::State& state) {
    const auto t = tasks::generate_task(static_cast<int>(state.range(0)), 1).task;
    const auto h = oracle::policy_blatant(t);
    for (auto _ : state) benchmark::DoNotOptimize(detect::classify(t, h));
}
BENCHMARK(bm_classify_blatant)->Arg(1)->Arg(20);

static void bm_induce_min_rule(benchmark::State& state) {
    const auto t = tasks::generate_task(static_cast<int>(state.range(0)), 3).task;
    const auto space = oracle::SearchSpace::for_task(t);
    for (auto _ : state) benchmark::DoNotOptimize(oracle::induce_min_rule(t, space));
}
BENCHMARK(bm_induce_min_rule)->Arg(1)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void bm_perturb(benchmark::State& state) {
    const auto t = tasks::generate_task(20, 4).task;
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(detect::apply_perturbation(t, detect::make_perturbation(t, seed++)));
}
BENCHMARK(bm_perturb);

BENCHMARK_MAIN();
