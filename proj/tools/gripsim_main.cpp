// gripsim: calibrate, probe and plan grasps on the simulated gripper.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gripsim/commands.hpp"
#include "gripsim/serialization.hpp"

namespace {

struct SharedFlags {
  std::string config;
  std::vector<std::string> fixtures;
  std::uint64_t seed = 0;
  std::string noise;
  bool dry_run = false;
  std::string out;
};

void add_shared(CLI::App* sub, SharedFlags& f, const std::string& fixture_help) {
  sub->add_option("--config", f.config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--fixture", f.fixtures, fixture_help);
  sub->add_option("--seed", f.seed, "Override the config seed");
  sub->add_option("--noise", f.noise, "Sensor noise on|off")->check(CLI::IsMember({"on", "off"}));
  sub->add_flag("--dry-run", f.dry_run, "Validate and print the resolved config; write nothing");
  sub->add_option("--out", f.out, "Output directory (overrides output_dir)");
}

gripsim::CommandOptions to_options(const CLI::App* sub, const SharedFlags& f) {
  gripsim::CommandOptions o;
  o.config_path = f.config;
  o.fixtures = f.fixtures;
  if (sub->count("--seed") > 0) o.seed = f.seed;
  if (!f.noise.empty()) o.noise = f.noise == "on";
  o.dry_run = f.dry_run;
  if (!f.out.empty()) o.out_dir = f.out;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-static soft-rigid gripper simulator with self-sensing joints"};
  app.set_version_flag("--version", gripsim::version());
  app.require_subcommand(1);

  SharedFlags flags;
  auto* calibrate = app.add_subcommand("calibrate", "Run both calibration sweeps and write the tables");
  add_shared(calibrate, flags, "Unused by calibrate");
  auto* probe = app.add_subcommand("probe", "Probe one or more fixtures and write a report per fixture");
  add_shared(probe, flags, "Fixture to probe (repeatable; default: probe.fixture, else all)");
  auto* scenario = app.add_subcommand("scenario", "Execute the plan and write the stiffness map");
  add_shared(scenario, flags, "Fixture to plan on (default: plan.fixture)");
  auto* sensitivity = app.add_subcommand("sensitivity", "Rank (p0, closing distance) by separation");
  add_shared(sensitivity, flags, "The two fixtures to compare (given twice)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // Bad flags are configuration errors; --help and --version exit 0.
    return code == 0 ? 0 : gripsim::kExitConfig;
  }

  if (calibrate->parsed()) return gripsim::cmd_calibrate(to_options(calibrate, flags));
  if (probe->parsed()) return gripsim::cmd_probe(to_options(probe, flags));
  if (scenario->parsed()) return gripsim::cmd_scenario(to_options(scenario, flags));
  return gripsim::cmd_sensitivity(to_options(sensitivity, flags));
}
