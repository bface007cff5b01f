#include "valueramp/analysis.hpp"
#include "valueramp/gridworld.hpp"
#include "valueramp/learning_rule.hpp"
#include "valueramp/runner.hpp"

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

using namespace valueramp;

namespace {

std::string map_text(const char* name) {
    std::ifstream in(std::string(VALUERAMP_DATA_DIR) + "/maps/" + name, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

TaskModel room_task() {
    const GridMap m = parse_map(map_text("room.map"));
    return compile(m, GridSemantics{});
}

void BM_Update(benchmark::State& state) {
    ValueFunction v(64, 5, 7);
    std::uint32_t i = 0;
    for (auto _ : state) {
        const StateId s(i % 64);
        const StateId t((i * 7 + 1) % 64);
        benchmark::DoNotOptimize(update_in_place(v, s, ActionId(i % 5), t, i % 3, StepSize(1)));
        ++i;
    }
}
BENCHMARK(BM_Update);

void BM_RunSteps(benchmark::State& state) {
    const TaskModel t = room_task();
    RunnerParams p;
    p.epsilon = Probability::from_decimal(state.range(0) == 0 ? "0" : "1");
    Simulator sim(t, StepSize(1), p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim.step());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RunSteps)->Arg(0)->Arg(1);

void BM_OptimalValues(benchmark::State& state) {
    const TaskModel t = room_task();
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_values(t, StepSize(1)));
    }
}
BENCHMARK(BM_OptimalValues);

void BM_OptimalValuesByDistance(benchmark::State& state) {
    const TaskModel t = room_task();
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_values_by_distance(t, StepSize(1)));
    }
}
BENCHMARK(BM_OptimalValuesByDistance);

void BM_CompileMap(benchmark::State& state) {
    const GridMap rr = parse_map(map_text("swamp.map"));
    GridSemantics semantics;
    semantics.variant = GridVariant::rr;
    for (auto _ : state) {
        benchmark::DoNotOptimize(compile(rr, semantics));
    }
}
BENCHMARK(BM_CompileMap);

void BM_Strategy(benchmark::State& state) {
    const TaskModel t = room_task();
    const ValueFunction q = optimal_value_function(t, StepSize(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(strategy(q, t, StepSize(1)));
    }
}
BENCHMARK(BM_Strategy);

}  // namespace

BENCHMARK_MAIN();
