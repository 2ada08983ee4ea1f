#include <benchmark/benchmark.h>

#include <random>

#include "parley/grid/controller.hpp"
#include "parley/grid/emit.hpp"
#include "parley/grid/map.hpp"
#include "parley/indicators/indicators.hpp"
#include "parley/mc/build.hpp"
#include "parley/mc/check.hpp"
#include "parley/prism/parser.hpp"
#include "parley/prism/printer.hpp"
#include "parley/synth/evaluator.hpp"
#include "parley/urc/augment.hpp"

using namespace parley;

namespace {

prism::Model augmented(int n) {
    auto map = grid::generate_map(n, 1);
    auto m = grid::emit_model(map, grid::dijkstra_controller(map), {});
    return urc::augment(m, grid::robot_augment_spec(m, n));
}

} // namespace

static void BM_ParsePrint(benchmark::State& state) {
    const auto text = prism::print(augmented(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(prism::parse(text));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParsePrint)->Arg(5)->Arg(10)->Arg(20);

static void BM_Build(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    mc::CompiledModel cm(augmented(n));
    std::vector<double> values(cm.parameters().size(), n);
    std::size_t states = 0;
    for (auto _ : state) states = cm.build(values).num_states();
    state.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_Build)->Arg(5)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);

static void BM_Check(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    mc::CompiledModel cm(augmented(n));
    std::vector<double> values(cm.parameters().size(), n);
    auto d = cm.build(values);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc::prob_reach(d, "goal"));
        benchmark::DoNotOptimize(mc::expected_reward(d, "cost", "done"));
    }
}
BENCHMARK(BM_Check)->Arg(5)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);

static void BM_EvaluatePolicy(benchmark::State& state) {
    auto pm = augmented(10);
    synth::Evaluator ev(pm, synth::robot_objectives());
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> gene(1, 10);
    for (auto _ : state) {
        urc::Policy p(ev.params().size());
        for (auto& v : p) v = gene(rng);
        benchmark::DoNotOptimize(ev.evaluate(p));
    }
}
BENCHMARK(BM_EvaluatePolicy)->Unit(benchmark::kMillisecond);

static void BM_Hypervolume(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<indicators::Point> pts(static_cast<std::size_t>(state.range(0)));
    for (auto& p : pts) p = {u(rng), 100 * u(rng)};
    for (auto _ : state) benchmark::DoNotOptimize(indicators::hypervolume_2d(pts, indicators::Point{0.0, 100.0}));
}
BENCHMARK(BM_Hypervolume)->Range(8, 4096);

BENCHMARK_MAIN();
