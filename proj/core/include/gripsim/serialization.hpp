#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gripsim/calibration.hpp"
#include "gripsim/planner.hpp"
#include "gripsim/probing.hpp"

namespace gripsim {

/// Library version, e.g. "0.1.0".
const char* version();

/// Run context stamped into every report.
struct ReportMeta {
  bool noise = true;
  std::uint64_t seed = 0;
  std::string fixture;
  std::optional<double> coord;
  double k_true_n_per_mm = 0.0;  ///< Plant stiffness at the probed location (ground truth).
};

/// All serializers return LF-terminated text with a fixed key order, so equal
/// inputs give byte-equal output.
std::string probe_report_json(const ProbeReport& report, const ReportMeta& meta);
/// `step,dc_mm,dp_kpa`, one row per probe step.
std::string probe_trace_csv(const ProbeReport& report);

/// Flag names joined by '|', or "none".
std::string flag_string(const ProbeFlags& flags);

std::string stiffness_map_json(const StiffnessMap& map, const ReportMeta& meta);
/// `coord,k_r_n_per_mm,flag`; k_r is empty when it could not be estimated.
std::string stiffness_map_csv(const StiffnessMap& map);
/// Long format for bar charts: `coord,unit,series,value,status`, with status
/// one of chosen, avoided or ok.
std::string stiffness_map_plot_csv(const StiffnessMap& map);

std::string sensitivity_csv(const std::vector<SensitivityEntry>& entries);

std::string calibration_summary_json(const CalibrationSummary& summary,
                                     const CalibrationTable& regulated,
                                     const CalibrationTable& locked);
/// `alpha_deg,forward_kpa,backward_kpa,forward_torque_nmm,backward_torque_nmm`.
std::string hysteresis_csv(const HysteresisTrace& trace);

struct RunMeta {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  bool noise = true;
  std::vector<std::pair<std::string, std::string>> outputs;  ///< (file name, content hash)
};

std::string run_meta_json(const RunMeta& meta);

}  // namespace gripsim
