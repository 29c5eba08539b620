#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "sokolab/analysis.hpp"
#include "sokolab/board.hpp"
#include "sokolab/brute_force.hpp"
#include "sokolab/oracle.hpp"
#include "sokolab/restart.hpp"
#include "sokolab/rng.hpp"
#include "sokolab/search.hpp"
#include "sokolab/treemodel.hpp"

namespace {

// 7x7, two boxes, ~4k reachable states; representative of experiment corpora.
const char* kLevel =
    "#######\n"
    "# #   #\n"
    "# $   #\n"
    "# # @ #\n"
    "#. .$ #\n"
    "#    ##\n"
    "#######\n";

const sokolab::Board& level() {
    static const sokolab::Board b = sokolab::parse_level(kLevel);
    return b;
}

void BM_LubyTerm(benchmark::State& state) {
    std::uint64_t i = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sokolab::luby_term(i));
        i = i % 100000 + 1;
    }
}
BENCHMARK(BM_LubyTerm);

void BM_ParseLevel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sokolab::parse_level(kLevel));
}
BENCHMARK(BM_ParseLevel);

void BM_ValueMatching(benchmark::State& state) {
    const auto& b = level();
    const sokolab::State s = sokolab::initial_state(b);
    for (auto _ : state) benchmark::DoNotOptimize(sokolab::value_matching(b, s));
}
BENCHMARK(BM_ValueMatching);

void BM_PolicyFromValue(benchmark::State& state) {
    const auto& b = level();
    const sokolab::State s = sokolab::initial_state(b);
    for (auto _ : state) benchmark::DoNotOptimize(sokolab::policy_from_value(b, s, 1.0));
}
BENCHMARK(BM_PolicyFromValue);

void BM_BruteForce(benchmark::State& state) {
    const auto& b = level();
    for (auto _ : state) benchmark::DoNotOptimize(sokolab::brute_force_solve(b, 200000));
}
BENCHMARK(BM_BruteForce);

// Fresh oracle each iteration so its caches do not amortize away the work.
void BM_BestFirstSearch(benchmark::State& state) {
    const auto& b = level();
    sokolab::OracleConfig cfg;
    cfg.dropout = 0.0;
    cfg.sigma = 0.0;
    std::uint64_t expansions = 0;
    for (auto _ : state) {
        sokolab::StochasticOracle oracle(b, cfg, 1);
        const auto out =
            sokolab::best_first_search(b, {sokolab::EvalVariant::Ours, 1.0}, oracle, 100000);
        expansions += out.expansions;
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(expansions));
}
BENCHMARK(BM_BestFirstSearch);

void BM_SampleLeftCost(benchmark::State& state) {
    sokolab::LeftTailModelParams params;
    params.n = static_cast<std::uint64_t>(state.range(0));
    sokolab::Rng rng(7);
    for (auto _ : state) benchmark::DoNotOptimize(sokolab::sample_left_cost(params, rng));
}
BENCHMARK(BM_SampleLeftCost)->Arg(16)->Arg(64)->Arg(256);

void BM_SampleRightCost(benchmark::State& state) {
    sokolab::RightTailModelParams params;
    sokolab::Rng rng(7);
    for (auto _ : state) benchmark::DoNotOptimize(sokolab::sample_right_cost(params, rng));
}
BENCHMARK(BM_SampleRightCost);

void BM_UniversalEstimate(benchmark::State& state) {
    sokolab::RightTailModelParams params;
    params.cost_cap = 4096; // experiment-budget-sized cap; the recurrence walks cutoffs up to it
    const sokolab::RuntimeSample smp = sokolab::sample_right_runtime(params, 1000, 7);
    for (auto _ : state) benchmark::DoNotOptimize(sokolab::universal_strategy_estimate(smp));
}
BENCHMARK(BM_UniversalEstimate);

void BM_HillAlpha(benchmark::State& state) {
    sokolab::RightTailModelParams params;
    const sokolab::RuntimeSample smp = sokolab::sample_right_runtime(params, 100000, 7);
    std::vector<std::uint64_t> solved;
    for (std::size_t i = 0; i < smp.costs.size(); ++i)
        if (smp.solved[i]) solved.push_back(smp.costs[i]);
    for (auto _ : state)
        benchmark::DoNotOptimize(sokolab::hill_alpha(solved, solved.size() / 10));
}
BENCHMARK(BM_HillAlpha);

} // namespace

BENCHMARK_MAIN();
