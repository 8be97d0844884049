#include "gripsim/planner.hpp"

#include <algorithm>
#include <future>
#include <string>

#include "gripsim/errors.hpp"

namespace gripsim {

void ProbePlan::validate() const {
  if (locations.size() < 2) throw ConfigError("plan", "a plan needs at least two locations");
  if (configs.size() != locations.size()) {
    throw ConfigError("plan", "one probe configuration per location is required");
  }
  for (std::size_t i = 1; i < locations.size(); ++i) {
    if (!(locations[i] > locations[i - 1])) {
      throw ConfigError("plan", "locations must be strictly increasing");
    }
  }
}

ProbePlan make_plan(ObjectShape shape, double span, int n, const ProbeConfig& base) {
  if (n < 2) throw ConfigError("plan.n", "at least two probe locations are required");
  if (!(span > 0.0)) throw ConfigError("plan", "probe span must be positive");
  ProbePlan plan;
  plan.kind = shape == ObjectShape::kElongated ? PlanKind::kLinear : PlanKind::kAngular;
  if (plan.kind == PlanKind::kAngular && span > 180.0) {
    throw ConfigError("plan.range_deg", "angular range must not exceed 180 deg");
  }
  for (int i = 0; i < n; ++i) {
    // Divide last so that integer-spaced plans land exactly on their grid.
    plan.locations.push_back(span * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  plan.configs.assign(plan.locations.size(), base);
  return plan;
}

void select_grasp(StiffnessMap& map, double avoid_fraction) {
  if (!(avoid_fraction >= 0.0 && avoid_fraction <= 1.0)) {
    throw ConfigError("plan.avoid_fraction", "must lie in [0, 1]");
  }
  map.avoid_fraction = avoid_fraction;
  map.avoided.clear();

  std::optional<double> best;
  for (const auto& e : map.entries) {
    if (e.usable()) best = std::max(best.value_or(*e.report.k_r), *e.report.k_r);
  }
  if (!best) throw PlanningError("no safe grasp: every probe location is flagged");

  const double cutoff = avoid_fraction * *best;
  const StiffnessEntry* chosen = nullptr;
  for (const auto& e : map.entries) {
    if (!e.usable() || *e.report.k_r < cutoff) {
      map.avoided.push_back(e.coord);
      continue;
    }
    if (chosen == nullptr || *e.report.k_r > *chosen->report.k_r) chosen = &e;
  }
  map.chosen = chosen->coord;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

StiffnessMap execute_plan(const ProbePlan& plan, const ObjectModel& fixture,
                          const PlantConfig& plant, const CalibrationTable& table,
                          const PlanRunOptions& options) {
  plan.validate();
  const auto kind = fixture.profile.kind;
  if ((kind == ProfileKind::kLinearPositions && plan.kind != PlanKind::kLinear) ||
      (kind == ProfileKind::kAngularPositions && plan.kind != PlanKind::kAngular)) {
    throw ConfigError("plan.shape", "plan shape does not match the fixture's profile kind");
  }
  const auto [lo, hi] = fixture.profile.span();
  for (double c : plan.locations) {
    if (c < lo || c > hi) {
      throw ConfigError("plan", "location " + std::to_string(c) + " outside the fixture profile");
    }
  }

  auto probe_location = [&](std::size_t i) {
    PlantConfig local = plant;
    local.sensor.seed = derive_seed(options.seed, i);
    const ProbeConfig& config = plan.configs[i];
    GripperSim sim(local, fixture, plan.locations[i], config.step_time_s);
    StiffnessEntry entry;
    entry.coord = plan.locations[i];
    entry.report = run_probe(sim, table, config);
    if (fixture.damage_threshold_n && entry.report.est_force_n &&
        *entry.report.est_force_n > *fixture.damage_threshold_n) {
      entry.report.flags.damage_risk = true;
    }
    return entry;
  };

  StiffnessMap map;
  map.kind = plan.kind;
  const std::size_t n = plan.locations.size();
  if (options.parallel) {
    std::vector<std::future<StiffnessEntry>> futures;
    futures.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      futures.push_back(std::async(std::launch::async, probe_location, i));
    }
    for (auto& f : futures) map.entries.push_back(f.get());
  } else {
    for (std::size_t i = 0; i < n; ++i) map.entries.push_back(probe_location(i));
  }
  select_grasp(map, options.avoid_fraction);
  return map;
}

}  // namespace gripsim
