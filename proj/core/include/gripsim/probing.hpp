#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gripsim/calibration.hpp"
#include "gripsim/simulation.hpp"

namespace gripsim {

/// Floor for the automatic contact threshold, used when the sensor is ideal.
inline constexpr double kMinContactThresholdKpa = 0.05;

struct ProbeConfig {
  double p0_kpa = 60.0;
  double approach_step_mm = 1.0;
  double probe_step_mm = 6.0;
  int n_probe_steps = 5;
  /// Absent: 3 sigma of one sensor read plus one quantisation step.
  std::optional<double> contact_threshold_kpa;
  int settle_reads = 8;
  double step_time_s = 1.0;

  /// Total closing distance after contact.
  double closing_distance_mm() const { return n_probe_steps * probe_step_mm; }
  void validate() const;
};

double default_contact_threshold(const SensorModel& sensor);
double effective_contact_threshold(const ProbeConfig& config, const SensorModel& sensor);

struct ProbeFlags {
  bool saturated = false;
  bool no_contact = false;
  bool out_of_table = false;
  bool degenerate_deformation = false;
  bool damage_risk = false;

  bool any() const {
    return saturated || no_contact || out_of_table || degenerate_deformation || damage_risk;
  }
  bool operator==(const ProbeFlags&) const = default;
};

struct ProbeReport {
  std::optional<double> contact_opening_mm;
  std::vector<std::pair<double, double>> dp_trace;  ///< (cumulative closing mm, measured dp kPa)
  std::optional<double> est_alpha_deg;
  std::optional<double> est_force_n;
  std::optional<double> k_r;         ///< Relative stiffness: force / closing distance.
  std::optional<double> k_o_est;     ///< Hooke stiffness: force / estimated deformation.
  std::optional<double> est_delta_mm;
  ProbeFlags flags;
  double p0_kpa = 0.0;
  double closing_distance_mm = 0.0;

  bool operator==(const ProbeReport&) const = default;
};

struct ContactDetection {
  std::optional<double> opening_mm;  ///< Estimated opening at first touch.
  double detected_at_mm = 0.0;       ///< Opening of the step that tripped the threshold.
  double dp_kpa = 0.0;               ///< Signal at that step.
  int steps = 0;
};

/// Closes in approach steps from the current (fully open, locked) state until
/// the settle-averaged reading exceeds the locked baseline by the contact
/// threshold. Below the fabric slack the fingertip yields freely, so the
/// signal at detection maps through the calibration curve to the fingertip
/// extent, which is added back to estimate where touch first happened.
ContactDetection detect_contact(GripperSim& sim, const CalibrationTable& table,
                                const ProbeConfig& config);

/// Estimated quantities from a final pressure change. Negative readings are
/// treated as no change.
struct DpEstimate {
  std::optional<double> alpha_deg;
  std::optional<double> force_n;
  std::optional<double> k_r;
  std::optional<double> k_o;
  std::optional<double> delta_mm;
  bool out_of_table = false;
  bool degenerate_deformation = false;
};

DpEstimate estimate_from_dp(const CalibrationTable& table, const FingerGeometry& geom,
                            double p0_kpa, double closing_distance_mm, double dp_kpa);

/// Five-step (by default) probe starting at `contact_opening_mm`: returns
/// to the contact opening, takes the baseline, then closes `probe_step_mm`
/// at a time recording the settle-averaged pressure change.
ProbeReport probe(GripperSim& sim, const CalibrationTable& table, const ProbeConfig& config,
                  double contact_opening_mm);

/// Full protocol: open, pressurise and lock, detect contact, probe.
ProbeReport run_probe(GripperSim& sim, const CalibrationTable& table, const ProbeConfig& config);

struct SensitivityEntry {
  double p0_kpa = 0.0;
  double closing_distance_mm = 0.0;
  double dp_a_kpa = 0.0;
  double dp_b_kpa = 0.0;
  double separation_kpa = 0.0;
  double score = 0.0;  ///< separation / sensor sigma (separation itself for an ideal sensor)
  bool flagged = false;
};

/// Noise-free probes of two objects over every (p0, closing distance) pair,
/// ranked by score descending. Ties, and flagged pairs (sorted last), keep
/// grid order.
std::vector<SensitivityEntry> sensitivity_sweep(const PlantConfig& plant,
                                                const CalibrationTable& table,
                                                const ObjectModel& object_a, double coord_a,
                                                const ObjectModel& object_b, double coord_b,
                                                const ProbeConfig& base,
                                                const std::vector<double>& p0_grid_kpa,
                                                const std::vector<double>& dc_grid_mm);

}  // namespace gripsim
