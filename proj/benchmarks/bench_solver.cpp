#include <benchmark/benchmark.h>

#include "gripsim/contact.hpp"
#include "gripsim/plant.hpp"

namespace {

using namespace gripsim;

void BM_SolveEquilibrium(benchmark::State& state) {
  const PlantConfig plant;
  const RingState ring = lock(RingState::regulated(60.0), plant.ring);
  const double k = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_equilibrium(plant.geometry, ring, plant.ring, k, 30.0));
  }
}
BENCHMARK(BM_SolveEquilibrium)->Arg(1)->Arg(50)->Arg(202)->Arg(1000);

void BM_SolveSaturated(benchmark::State& state) {
  const PlantConfig plant;
  const RingState ring = lock(RingState::regulated(0.0), plant.ring);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_equilibrium(plant.geometry, ring, plant.ring, 500.0, 80.0));
  }
}
BENCHMARK(BM_SolveSaturated);

}  // namespace
