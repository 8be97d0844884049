#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gripsim/calibration.hpp"
#include "gripsim/contact.hpp"
#include "gripsim/planner.hpp"
#include "gripsim/probing.hpp"

namespace gripsim {

struct CalibrationSection {
  RegulatedSweepSpec regulated;
  LockedSweepSpec locked;
  std::string regulated_table = "calib_regulated.csv";
  std::string locked_table = "calib_locked.csv";
  /// Existing locked-sweep table to estimate with; generated in memory when absent.
  std::optional<std::string> table_path;
};

struct PlanSection {
  std::string fixture;
  ObjectShape shape = ObjectShape::kElongated;
  double span = 0.0;  ///< mm for elongated, deg for round
  int n = 0;
  double avoid_fraction = 0.6;
  ProbeConfig probe;  ///< Global probe section with plan overrides applied.
};

struct SensitivitySection {
  std::vector<std::string> fixtures;
  std::vector<double> p0_kpa = {0.0, 20.0, 40.0, 60.0, 80.0};
  std::vector<double> dc_mm = {5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
};

/// Fully resolved run description. Every physical default lives here, so a
/// printed config documents the experiment completely.
struct ScenarioConfig {
  PlantConfig plant;
  CalibrationSection calibration;
  ProbeConfig probe;
  std::optional<std::string> probe_fixture;
  std::optional<double> probe_coord;
  std::map<std::string, ObjectModel> fixtures;
  std::optional<PlanSection> plan;
  SensitivitySection sensitivity;
  std::uint64_t seed = 0;
  bool noise = true;
  std::string output_dir = "out";

  /// Plant as the simulator should see it: sensor seeded, and ideal when
  /// noise is off.
  PlantConfig effective_plant() const;
  /// Coordinate to probe on `fixture`: the configured one, else 0 for a
  /// uniform profile, else the first sample.
  double coord_for(const ObjectModel& fixture) const;
  /// Fixture by name; ConfigError listing the available names otherwise.
  const ObjectModel& fixture(const std::string& name) const;
  std::string fixture_names() const;
};

/// Parses a JSON config. Unknown keys and invalid values raise ConfigError
/// naming the dotted key path.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form (sorted keys, two-space indent). Parsing it again
/// yields the same config.
std::string config_to_json(const ScenarioConfig& config);

}  // namespace gripsim
