#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gripsim/config.hpp"

namespace gripsim {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitConfig = 2,
  kExitRuntimeFlag = 3,
};

struct CommandOptions {
  std::filesystem::path config_path;
  std::vector<std::string> fixtures;  ///< --fixture, repeatable
  std::optional<std::uint64_t> seed;
  std::optional<bool> noise;
  bool dry_run = false;
  std::optional<std::filesystem::path> out_dir;
  std::ostream* out = nullptr;  ///< Defaults to std::cout.
  std::ostream* err = nullptr;  ///< Defaults to std::cerr.
};

/// Loads the config and applies the command-line overrides.
ScenarioConfig resolve_config(const CommandOptions& options);

/// Locked-sweep table used for estimation: the configured file (relative to
/// the config's directory) or a fresh in-memory sweep of the plant.
CalibrationTable load_or_generate_locked_table(const ScenarioConfig& config,
                                               const std::filesystem::path& config_dir);

/// Each command returns an ExitCode and reports errors on the err stream.
int cmd_calibrate(const CommandOptions& options);
int cmd_probe(const CommandOptions& options);
int cmd_scenario(const CommandOptions& options);
int cmd_sensitivity(const CommandOptions& options);

}  // namespace gripsim
