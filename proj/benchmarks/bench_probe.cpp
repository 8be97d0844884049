#include <benchmark/benchmark.h>

#include "gripsim/planner.hpp"
#include "gripsim/probing.hpp"

namespace {

using namespace gripsim;

const CalibrationTable& table() {
  static const CalibrationTable t = generate_locked_sweep(PlantConfig{}, LockedSweepSpec{});
  return t;
}

void BM_RunProbe(benchmark::State& state) {
  const ObjectModel cube{StiffnessProfile::uniform(202.39), 40.0, std::nullopt};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    PlantConfig plant;
    plant.sensor.seed = ++seed;
    GripperSim sim(plant, cube, 0.0);
    benchmark::DoNotOptimize(run_probe(sim, table(), ProbeConfig{}));
  }
}
BENCHMARK(BM_RunProbe);

void BM_ExecutePlan(benchmark::State& state) {
  const ObjectModel orange{StiffnessProfile::uniform(2.5), 70.0, std::nullopt};
  const ProbePlan plan = make_plan(ObjectShape::kRound, 180.0, 7, ProbeConfig{});
  PlanRunOptions options;
  options.parallel = state.range(0) != 0;
  for (auto _ : state) {
    ++options.seed;
    benchmark::DoNotOptimize(execute_plan(plan, orange, PlantConfig{}, table(), options));
  }
}
BENCHMARK(BM_ExecutePlan)->Arg(0)->Arg(1)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
