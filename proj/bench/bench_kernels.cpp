// Serial reference vs OpenMP kernels. Outputs are identical; only timing differs.

#include <benchmark/benchmark.h>

#include <vector>

#include "oamch/kernels.hpp"
#include "oamch/montecarlo.hpp"
#include "oamch/search.hpp"

using namespace oamch;

namespace {

std::vector<double> lattice(int n)
{
    std::vector<double> v;
    for (int k = 0; k < n; ++k) v.push_back(kTwoPi * k / n);
    return v;
}

const ChEvaluator& evaluator()
{
    static const ChEvaluator eval(wrap_angle(0.4), wrap_angle(1.3), StepIndex(0.5));
    return eval;
}

template <bool Parallel>
void theta_table(benchmark::State& state)
{
    const auto angles = lattice(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        if constexpr (Parallel) {
            benchmark::DoNotOptimize(parallel::theta_table(evaluator(), angles));
        } else {
            benchmark::DoNotOptimize(serial::theta_table(evaluator(), angles));
        }
    }
}

template <bool Parallel>
void best_on_table(benchmark::State& state)
{
    const auto table = serial::theta_table(evaluator(), lattice(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        if constexpr (Parallel) {
            benchmark::DoNotOptimize(parallel::best_on_table(table));
        } else {
            benchmark::DoNotOptimize(serial::best_on_table(table));
        }
    }
}

template <bool Parallel>
void count_outcomes(benchmark::State& state)
{
    const OutcomeThresholds th{0.2, 0.45, 0.5, 0.9};
    const CounterRng rng(42, 0);
    const auto trials = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        if constexpr (Parallel) {
            benchmark::DoNotOptimize(parallel::count_outcomes(th, rng, trials));
        } else {
            benchmark::DoNotOptimize(serial::count_outcomes(th, rng, trials));
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials));
}

template <bool Parallel>
void scan(benchmark::State& state)
{
    ScanGrid grid;
    grid.alpha_steps = static_cast<int>(state.range(0));
    grid.beta_steps = grid.alpha_steps;
    grid.theta_policy = ThetaPolicy::optimize_per_point;
    for (auto _ : state) {
        if constexpr (Parallel) {
            benchmark::DoNotOptimize(scan_alpha_beta(grid, StepIndex(0.5)));
        } else {
            benchmark::DoNotOptimize(serial::scan_alpha_beta(grid, StepIndex(0.5)));
        }
    }
}

} // namespace

BENCHMARK(theta_table<false>)->Arg(16)->Arg(64);
BENCHMARK(theta_table<true>)->Arg(16)->Arg(64);
BENCHMARK(best_on_table<false>)->Arg(16)->Arg(32);
BENCHMARK(best_on_table<true>)->Arg(16)->Arg(32);
BENCHMARK(count_outcomes<false>)->Arg(1 << 20);
BENCHMARK(count_outcomes<true>)->Arg(1 << 20);
BENCHMARK(scan<false>)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(scan<true>)->Arg(9)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
