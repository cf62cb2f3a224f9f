#include <benchmark/benchmark.h>

#include "soundvi/solver.hpp"

namespace {

using namespace soundvi;

/// Chain 0 -> 1 -> ... -> n-1 where each state also falls back to 0 with
/// probability 0.1 and to a sink with probability 0.01; goal n-1.
/// With `choices == 2` every state may instead stay put with probability 0.9.
SparseModel chain(std::size_t n, std::size_t choices) {
    RawModel raw;
    raw.num_states = n + 1;
    raw.row_groups.resize(n + 1);
    auto const sink = n;
    for (std::size_t s = 0; s < n; ++s) {
        auto const next = s + 1 < n ? s + 1 : s;
        raw.row_groups[s].push_back({{{next, 0.89}, {0, 0.1}, {sink, 0.01}}, 0.0, "go"});
        if (choices == 2) {
            raw.row_groups[s].push_back({{{s, 0.9}, {next, 0.09}, {sink, 0.01}}, 0.0, "wait"});
        }
    }
    raw.row_groups[sink].push_back({{{sink, 1.0}}, 0.0, "loop"});
    return validate_model(raw);
}

void run(benchmark::State& state, Method method, bool gauss_seidel, bool topological, std::size_t choices) {
    auto const model = chain(static_cast<std::size_t>(state.range(0)), choices);
    StateSet goal(model.num_states());
    goal.set(model.num_states() - 2);
    SolverConfig config;
    config.method = method;
    config.gauss_seidel = gauss_seidel;
    config.topological = topological;
    std::uint64_t iterations = 0;
    for (auto _ : state) {
        auto const r = solve(model, goal, config);
        iterations = r.iterations;
        benchmark::DoNotOptimize(r.value);
    }
    state.counters["iterations"] = static_cast<double>(iterations);
}

void BM_SviChain(benchmark::State& s) { run(s, Method::SVI, false, false, 1); }
void BM_IiChain(benchmark::State& s) { run(s, Method::II, false, false, 1); }
void BM_ViChain(benchmark::State& s) { run(s, Method::VI, false, false, 1); }
void BM_SviMdp(benchmark::State& s) { run(s, Method::SVI, false, false, 2); }
void BM_IiMdp(benchmark::State& s) { run(s, Method::II, false, false, 2); }
void BM_GsSviMdp(benchmark::State& s) { run(s, Method::SVI, true, false, 2); }
void BM_TopoSviMdp(benchmark::State& s) { run(s, Method::SVI, false, true, 2); }

}  // namespace

BENCHMARK(BM_SviChain)->Arg(10)->Arg(50);
BENCHMARK(BM_IiChain)->Arg(10)->Arg(50);
BENCHMARK(BM_ViChain)->Arg(10)->Arg(50);
BENCHMARK(BM_SviMdp)->Arg(10)->Arg(50);
BENCHMARK(BM_IiMdp)->Arg(10)->Arg(50);
BENCHMARK(BM_GsSviMdp)->Arg(10)->Arg(50);
BENCHMARK(BM_TopoSviMdp)->Arg(10)->Arg(50);
BENCHMARK_MAIN();
