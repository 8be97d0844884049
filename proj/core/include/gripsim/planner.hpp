#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gripsim/probing.hpp"

namespace gripsim {

enum class ObjectShape { kElongated, kRound };
enum class PlanKind { kLinear, kAngular };

/// Probe locations for one object. Elongated objects are probed at evenly
/// spaced positions along their body (mm); round objects by rotating the
/// wrist through evenly spaced angles (deg).
struct ProbePlan {
  PlanKind kind = PlanKind::kLinear;
  std::vector<double> locations;
  std::vector<ProbeConfig> configs;  ///< One per location.

  void validate() const;
};

/// `span` is the body length in mm (elongated) or the angular range in deg
/// (round). Throws ConfigError for n < 2.
ProbePlan make_plan(ObjectShape shape, double span, int n, const ProbeConfig& base);

struct StiffnessEntry {
  double coord = 0.0;
  ProbeReport report;

  bool usable() const { return report.k_r.has_value() && !report.flags.any(); }
};

struct StiffnessMap {
  PlanKind kind = PlanKind::kLinear;
  std::vector<StiffnessEntry> entries;  ///< Sorted by coordinate.
  double chosen = 0.0;
  std::vector<double> avoided;
  double avoid_fraction = 0.6;
};

/// Entries below `avoid_fraction` of the best usable k_r, and every flagged
/// entry, are avoided; the grasp goes to the highest remaining k_r, ties to
/// the smallest coordinate. Throws PlanningError when nothing is usable.
void select_grasp(StiffnessMap& map, double avoid_fraction);

struct PlanRunOptions {
  std::uint64_t seed = 0;
  double avoid_fraction = 0.6;
  bool parallel = true;
};

/// Probes every location with its own simulator and sensor stream. The seed
/// of location i depends only on (seed, i), so the map does not depend on
/// execution order.
StiffnessMap execute_plan(const ProbePlan& plan, const ObjectModel& fixture,
                          const PlantConfig& plant, const CalibrationTable& table,
                          const PlanRunOptions& options);

/// Derives an independent per-task seed (splitmix64 finaliser).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace gripsim
