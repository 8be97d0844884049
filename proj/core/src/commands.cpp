#include "gripsim/commands.hpp"

#include <cstdlib>
#include <functional>
#include <iostream>
#include <ostream>

#include "gripsim/errors.hpp"
#include "gripsim/output.hpp"
#include "gripsim/serialization.hpp"

namespace gripsim {
namespace {

namespace fs = std::filesystem;

std::ostream& out_of(const CommandOptions& o) { return o.out ? *o.out : std::cout; }
std::ostream& err_of(const CommandOptions& o) { return o.err ? *o.err : std::cerr; }

/// Reproducible builds set SOURCE_DATE_EPOCH; otherwise the stamp is fixed so
/// reruns stay byte-identical.
std::string creation_stamp() {
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  if (epoch == nullptr || *epoch == '\0') return "0";
  for (const char* c = epoch; *c; ++c) {
    if (*c < '0' || *c > '9') return "0";
  }
  return epoch;
}

fs::path config_dir(const CommandOptions& o) {
  const fs::path parent = o.config_path.parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

fs::path resolve_against(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

/// Collects output files and writes them, then run_meta.json with their
/// hashes. Nothing is written until every output has been produced.
class OutputSet {
 public:
  void add(std::string name, std::string contents) {
    files_.emplace_back(std::move(name), std::move(contents));
  }

  void write(const fs::path& dir, const std::string& command, const ScenarioConfig& config) {
    RunMeta meta;
    meta.command = command;
    meta.config_hash = fnv1a_hex(config_to_json(config));
    meta.seed = config.seed;
    meta.noise = config.noise;
    for (const auto& [name, contents] : files_) {
      write_file_atomic(dir / name, contents);
      meta.outputs.emplace_back(name, fnv1a_hex(contents));
    }
    write_file_atomic(dir / "run_meta.json", run_meta_json(meta));
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

ReportMeta report_meta(const ScenarioConfig& config, const std::string& fixture_name,
                       const ObjectModel& fixture, std::optional<double> coord) {
  ReportMeta meta;
  meta.noise = config.noise;
  meta.seed = config.seed;
  meta.fixture = fixture_name;
  meta.coord = coord;
  if (coord) meta.k_true_n_per_mm = stiffness_at(fixture, *coord);
  return meta;
}

std::string fmt(const std::optional<double>& v) { return v ? format_double(*v) : "n/a"; }

int guarded(const CommandOptions& options, const std::function<int()>& body) {
  std::ostream& err = err_of(options);
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "calibration table error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "invalid parameter: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PlanningError& e) {
    err << "planning failed: " << e.what() << "\n";
    return kExitRuntimeFlag;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

fs::path output_dir(const CommandOptions& options, const ScenarioConfig& config) {
  return options.out_dir ? *options.out_dir : fs::path(config.output_dir);
}

}  // namespace

ScenarioConfig resolve_config(const CommandOptions& options) {
  ScenarioConfig config = load_config(options.config_path);
  if (options.seed) config.seed = *options.seed;
  if (options.noise) config.noise = *options.noise;
  return config;
}

CalibrationTable load_or_generate_locked_table(const ScenarioConfig& config,
                                               const fs::path& config_dir) {
  if (config.calibration.table_path) {
    return read_csv(resolve_against(config_dir, *config.calibration.table_path));
  }
  LockedSweepSpec spec = config.calibration.locked;
  spec.created = creation_stamp();
  return generate_locked_sweep(config.plant, spec);
}

int cmd_calibrate(const CommandOptions& options) {
  return guarded(options, [&] {
    const ScenarioConfig config = resolve_config(options);
    std::ostream& out = out_of(options);
    if (options.dry_run) {
      out << config_to_json(config);
      return int{kExitOk};
    }
    RegulatedSweepSpec reg_spec = config.calibration.regulated;
    LockedSweepSpec locked_spec = config.calibration.locked;
    reg_spec.created = creation_stamp();
    locked_spec.created = reg_spec.created;

    const CalibrationTable regulated = generate_regulated_sweep(config.plant, reg_spec);
    const CalibrationTable locked = generate_locked_sweep(config.plant, locked_spec);
    const HysteresisTrace hysteresis =
        simulate_hysteresis(config.plant, locked_spec.hysteresis_p0_kpa, locked_spec.alpha_step_deg,
                            locked_spec.alpha_max_deg, locked_spec.dwell_s);
    const CalibrationSummary summary = summarize(regulated, locked, hysteresis);

    OutputSet files;
    files.add(config.calibration.regulated_table, to_csv(regulated));
    files.add(config.calibration.locked_table, to_csv(locked));
    files.add("calibration_summary.json", calibration_summary_json(summary, regulated, locked));
    files.add("hysteresis.csv", hysteresis_csv(hysteresis));
    const fs::path dir = output_dir(options, config);
    files.write(dir, "calibrate", config);

    out << "regulated table " << regulated.num_alpha() << "x" << regulated.num_p0()
        << ", locked table " << locked.num_alpha() << "x" << locked.num_p0() << "\n";
    out << "dead zone up to " << format_double(summary.dead_zone_extent_deg) << " deg\n";
    for (const auto& [p0, r2] : summary.dp_fit_r2) {
      out << "dp-alpha fit at p0=" << format_double(p0) << " kPa: R^2=" << format_double(r2) << "\n";
    }
    out << "hysteresis gap at p0=" << format_double(summary.hysteresis_p0_kpa)
        << " kPa: max " << format_double(summary.hysteresis_max_gap_kpa) << " kPa\n";
    out << "wrote " << dir.string() << "\n";
    return int{kExitOk};
  });
}

int cmd_probe(const CommandOptions& options) {
  return guarded(options, [&] {
    const ScenarioConfig config = resolve_config(options);
    std::vector<std::string> names = options.fixtures;
    if (names.empty() && config.probe_fixture) names.push_back(*config.probe_fixture);
    if (names.empty()) {
      for (const auto& [name, _] : config.fixtures) names.push_back(name);
    }
    if (names.empty()) throw ConfigError("fixtures", "no fixtures defined");
    for (const auto& name : names) config.fixture(name);

    std::ostream& out = out_of(options);
    if (options.dry_run) {
      out << config_to_json(config);
      return int{kExitOk};
    }

    const CalibrationTable table = load_or_generate_locked_table(config, config_dir(options));
    const PlantConfig plant = config.effective_plant();
    OutputSet files;
    bool runtime_flag = false;
    for (const auto& name : names) {
      const ObjectModel& fixture = config.fixture(name);
      const double coord = config.coord_for(fixture);
      GripperSim sim(plant, fixture, coord, config.probe.step_time_s);
      ProbeReport report = run_probe(sim, table, config.probe);
      if (fixture.damage_threshold_n && report.est_force_n &&
          *report.est_force_n > *fixture.damage_threshold_n) {
        report.flags.damage_risk = true;
      }
      runtime_flag = runtime_flag || report.flags.no_contact || report.flags.out_of_table;
      files.add("probe_" + name + ".json",
                probe_report_json(report, report_meta(config, name, fixture, coord)));
      files.add("probe_" + name + "_trace.csv", probe_trace_csv(report));
      out << name << ": contact " << fmt(report.contact_opening_mm) << " mm, F " << fmt(report.est_force_n)
          << " N, k_r " << fmt(report.k_r) << " N/mm, k_o " << fmt(report.k_o_est)
          << " N/mm, flags " << flag_string(report.flags) << "\n";
    }
    files.write(output_dir(options, config), "probe", config);
    return int{runtime_flag ? kExitRuntimeFlag : kExitOk};
  });
}

int cmd_scenario(const CommandOptions& options) {
  return guarded(options, [&] {
    const ScenarioConfig config = resolve_config(options);
    if (!config.plan) throw ConfigError("plan", "a scenario needs a plan section");
    if (options.fixtures.size() > 1) throw ConfigError("fixture", "a scenario probes one fixture");
    const std::string name = options.fixtures.empty() ? config.plan->fixture : options.fixtures.front();
    const ObjectModel& fixture = config.fixture(name);
    const ProbePlan plan = make_plan(config.plan->shape, config.plan->span, config.plan->n,
                                     config.plan->probe);

    std::ostream& out = out_of(options);
    if (options.dry_run) {
      out << config_to_json(config);
      return int{kExitOk};
    }

    const CalibrationTable table = load_or_generate_locked_table(config, config_dir(options));
    PlanRunOptions run;
    run.seed = config.seed;
    run.avoid_fraction = config.plan->avoid_fraction;
    const StiffnessMap map = execute_plan(plan, fixture, config.effective_plant(), table, run);

    OutputSet files;
    files.add("stiffness_map.json", stiffness_map_json(map, report_meta(config, name, fixture, std::nullopt)));
    files.add("stiffness_map.csv", stiffness_map_csv(map));
    files.add("stiffness_map_plot.csv", stiffness_map_plot_csv(map));
    files.write(output_dir(options, config), "scenario", config);

    const char* unit = map.kind == PlanKind::kLinear ? "mm" : "deg";
    for (const auto& e : map.entries) {
      out << format_double(e.coord) << " " << unit << ": k_r " << fmt(e.report.k_r) << " N/mm, flags "
          << flag_string(e.report.flags) << "\n";
    }
    out << "avoided:";
    for (double c : map.avoided) out << " " << format_double(c);
    out << "\nchosen: " << format_double(map.chosen) << " " << unit << "\n";
    return int{kExitOk};
  });
}

int cmd_sensitivity(const CommandOptions& options) {
  return guarded(options, [&] {
    const ScenarioConfig config = resolve_config(options);
    const std::vector<std::string> pair =
        options.fixtures.empty() ? config.sensitivity.fixtures : options.fixtures;
    if (pair.size() != 2) throw ConfigError("sensitivity.fixtures", "exactly two fixtures are required");
    const ObjectModel& a = config.fixture(pair[0]);
    const ObjectModel& b = config.fixture(pair[1]);

    std::ostream& out = out_of(options);
    if (options.dry_run) {
      out << config_to_json(config);
      return int{kExitOk};
    }

    const CalibrationTable table = load_or_generate_locked_table(config, config_dir(options));
    const auto ranking =
        sensitivity_sweep(config.effective_plant(), table, a, config.coord_for(a), b,
                          config.coord_for(b), config.probe, config.sensitivity.p0_kpa,
                          config.sensitivity.dc_mm);
    OutputSet files;
    files.add("sensitivity.csv", sensitivity_csv(ranking));
    files.write(output_dir(options, config), "sensitivity", config);
    if (!ranking.empty()) {
      const auto& top = ranking.front();
      out << "best separation of " << pair[0] << " vs " << pair[1] << ": p0="
          << format_double(top.p0_kpa) << " kPa, dc=" << format_double(top.closing_distance_mm)
          << " mm, separation " << format_double(top.separation_kpa) << " kPa (score "
          << format_double(top.score) << ")" << (top.flagged ? " [flagged]" : "") << "\n";
    }
    return int{kExitOk};
  });
}

}  // namespace gripsim
