#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gripsim/calibration.hpp"

namespace {

using namespace gripsim;

void BM_LockedSweep(benchmark::State& state) {
  const PlantConfig plant;
  for (auto _ : state) benchmark::DoNotOptimize(generate_locked_sweep(plant, LockedSweepSpec{}));
}
BENCHMARK(BM_LockedSweep);

// Random queries so the branch predictor does not learn the cell.
void BM_InterpTorque(benchmark::State& state) {
  const CalibrationTable t = generate_locked_sweep(PlantConfig{}, LockedSweepSpec{});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> a(0.0, 80.0), p(0.0, 80.0);
  std::vector<std::pair<double, double>> q(1024);
  for (auto& x : q) x = {a(rng), p(rng)};
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [alpha, p0] = q[i++ & 1023];
    benchmark::DoNotOptimize(interp_torque(t, alpha, p0));
  }
}
BENCHMARK(BM_InterpTorque);

void BM_AngleFromDp(benchmark::State& state) {
  const CalibrationTable t = generate_locked_sweep(PlantConfig{}, LockedSweepSpec{});
  std::mt19937_64 rng(2);
  std::vector<double> dps(1024);
  for (auto& dp : dps) dp = std::uniform_real_distribution<double>(0.0, interp_dp(t, 80.0, 60.0))(rng);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(angle_from_dp(t, dps[i++ & 1023], 60.0));
}
BENCHMARK(BM_AngleFromDp);

void BM_CsvRoundTrip(benchmark::State& state) {
  const CalibrationTable t = generate_locked_sweep(PlantConfig{}, LockedSweepSpec{});
  for (auto _ : state) benchmark::DoNotOptimize(parse_csv(to_csv(t)));
}
BENCHMARK(BM_CsvRoundTrip);

}  // namespace
