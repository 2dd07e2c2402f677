#include <benchmark/benchmark.h>

#include "atmroute/feasibility.hpp"
#include "atmroute/scenario.hpp"
#include "atmroute/solver.hpp"

using namespace atmroute;

namespace {

Instance scenario(int atms, int periods, std::uint64_t seed = 7) {
  ScenarioParams params;
  params.n_atms = atms;
  params.periods = periods;
  params.seed = seed;
  return generate_scenario(params);
}

SolveConfig quick_config() {
  SolveConfig cfg;
  cfg.time_limit = 30.0;
  cfg.max_stale_restarts = 3;
  return cfg;
}

void BM_GenerateScenario(benchmark::State& state) {
  ScenarioParams params;
  params.n_atms = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_scenario(params));
  }
}
BENCHMARK(BM_GenerateScenario)->Arg(28)->Arg(100);

void BM_SplitSchedule(benchmark::State& state) {
  const Instance inst = scenario(static_cast<int>(state.range(0)), 7);
  const SplitPolicy policy = make_policy(inst, SplitMode::split);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_split_schedule(inst, policy));
  }
}
BENCHMARK(BM_SplitSchedule)->Arg(28)->Arg(100);

void BM_CheckPlan(benchmark::State& state) {
  const Instance inst = scenario(28, 7);
  const SolveResult r = solve(inst, build_split_schedule(inst, make_policy(inst, SplitMode::split)), quick_config());
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_plan(inst, r.plan));
  }
}
BENCHMARK(BM_CheckPlan);

void BM_Construct(benchmark::State& state) {
  const Instance inst = scenario(static_cast<int>(state.range(0)), 7);
  const SplitSchedule s = build_split_schedule(inst, make_policy(inst, SplitMode::split));
  for (auto _ : state) {
    benchmark::DoNotOptimize(construct_plan(inst, s, 1));
  }
}
BENCHMARK(BM_Construct)->Arg(28)->Arg(60);

void BM_Solve(benchmark::State& state) {
  const Instance inst = scenario(28, 7);
  const SplitMode mode = state.range(0) != 0 ? SplitMode::split : SplitMode::no_split;
  const SplitSchedule s = build_split_schedule(inst, make_policy(inst, mode));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(inst, s, quick_config()));
  }
}
BENCHMARK(BM_Solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SolveExact(benchmark::State& state) {
  ScenarioParams params;
  params.n_atms = static_cast<int>(state.range(0));
  params.n_depots = 1;
  params.periods = 2;
  params.area_extent_km = 10.0;
  params.max_route_time = 600;
  params.total_demand_range = {200'000'000, 400'000'000};
  params.per_deposit_range = {100'000'000, 200'000'000};
  const Instance inst = generate_scenario(params);
  const SplitSchedule s = build_split_schedule(inst, make_policy(inst, SplitMode::no_split));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_exact(inst, s, {}));
  }
}
BENCHMARK(BM_SolveExact)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
