#include "gripsim/probing.hpp"

#include <algorithm>
#include <cmath>

#include "gripsim/errors.hpp"

namespace gripsim {

void ProbeConfig::validate() const {
  if (!(p0_kpa >= 0.0)) throw DomainError("initial pressure must be non-negative");
  if (!(approach_step_mm > 0.0)) throw DomainError("approach step must be positive");
  if (!(probe_step_mm > 0.0)) throw DomainError("probe step must be positive");
  if (n_probe_steps < 1) throw DomainError("at least one probe step is required");
  if (contact_threshold_kpa && !(*contact_threshold_kpa > 0.0)) {
    throw DomainError("contact threshold must be positive");
  }
  if (settle_reads < 1) throw DomainError("settle reads must be at least 1");
  if (!(step_time_s >= 0.0)) throw DomainError("step time must be non-negative");
}

double default_contact_threshold(const SensorModel& sensor) {
  return std::max(3.0 * sensor.sigma_kpa() + sensor.quant_step_kpa, kMinContactThresholdKpa);
}

double effective_contact_threshold(const ProbeConfig& config, const SensorModel& sensor) {
  return config.contact_threshold_kpa.value_or(default_contact_threshold(sensor));
}

ContactDetection detect_contact(GripperSim& sim, const CalibrationTable& table,
                                const ProbeConfig& config) {
  config.validate();
  const double threshold = effective_contact_threshold(config, sim.plant().sensor);
  const double start = sim.opening_mm();
  const double baseline = sim.settle_read(config.settle_reads);

  ContactDetection detection;
  for (int k = 1;; ++k) {
    const double opening = start - k * config.approach_step_mm;
    if (opening < 0.0) break;
    sim.move_to(opening);
    detection.steps = k;
    const double dp = sim.settle_read(config.settle_reads) - baseline;
    if (dp <= threshold) continue;

    detection.detected_at_mm = opening;
    detection.dp_kpa = dp;
    double extent = config.approach_step_mm;
    try {
      const double p0 = config.p0_kpa;
      const auto& alpha = table.alpha_grid_deg();
      const double dp_max = interp_dp(table, alpha.back(), p0);
      const double alpha_hat = angle_from_dp(table, std::min(dp, dp_max), p0);
      extent = tip_extent(sim.plant().geometry, deg_to_rad(alpha_hat));
    } catch (const std::exception&) {
      // Table cannot explain the signal; fall back to the previous step.
    }
    detection.opening_mm = std::min(opening + std::max(0.0, extent), sim.max_opening_mm());
    return detection;
  }
  return detection;
}

DpEstimate estimate_from_dp(const CalibrationTable& table, const FingerGeometry& geom,
                            double p0_kpa, double closing_distance_mm, double dp_kpa) {
  DpEstimate est;
  double alpha_deg = 0.0;
  try {
    alpha_deg = angle_from_dp(table, std::max(0.0, dp_kpa), p0_kpa);
  } catch (const SaturationError&) {
    est.out_of_table = true;
    return est;
  } catch (const RangeError&) {
    est.out_of_table = true;
    return est;
  }
  const double force = interp_torque(table, alpha_deg, p0_kpa) / geom.tip_arm_mm;
  est.alpha_deg = alpha_deg;
  est.force_n = force;
  est.k_r = force / closing_distance_mm;
  const double delta = object_deformation(geom, closing_distance_mm, deg_to_rad(alpha_deg));
  est.delta_mm = delta;
  if (delta > 0.0) {
    est.k_o = force / delta;
  } else {
    est.degenerate_deformation = true;
  }
  return est;
}

ProbeReport probe(GripperSim& sim, const CalibrationTable& table, const ProbeConfig& config,
                  double contact_opening_mm) {
  config.validate();
  ProbeReport report;
  report.p0_kpa = config.p0_kpa;
  report.closing_distance_mm = config.closing_distance_mm();
  report.contact_opening_mm = contact_opening_mm;

  sim.move_to(contact_opening_mm);
  const double baseline = sim.settle_read(config.settle_reads);
  for (int i = 1; i <= config.n_probe_steps; ++i) {
    const double target = contact_opening_mm - i * config.probe_step_mm;
    if (target < 0.0) report.flags.saturated = true;
    sim.move_to(target);
    if (sim.equilibrium().saturated) report.flags.saturated = true;
    const double dp = sim.settle_read(config.settle_reads) - baseline;
    report.dp_trace.emplace_back(i * config.probe_step_mm, dp);
  }

  const DpEstimate est = estimate_from_dp(table, sim.plant().geometry, config.p0_kpa,
                                          report.closing_distance_mm, report.dp_trace.back().second);
  report.flags.out_of_table = est.out_of_table;
  report.flags.degenerate_deformation = est.degenerate_deformation;
  report.est_alpha_deg = est.alpha_deg;
  report.est_force_n = est.force_n;
  report.k_r = est.k_r;
  report.k_o_est = est.k_o;
  report.est_delta_mm = est.delta_mm;
  return report;
}

ProbeReport run_probe(GripperSim& sim, const CalibrationTable& table, const ProbeConfig& config) {
  config.validate();
  sim.reset_and_lock(config.p0_kpa);
  const ContactDetection detection = detect_contact(sim, table, config);
  if (!detection.opening_mm) {
    ProbeReport report;
    report.p0_kpa = config.p0_kpa;
    report.closing_distance_mm = config.closing_distance_mm();
    report.flags.no_contact = true;
    return report;
  }
  return probe(sim, table, config, *detection.opening_mm);
}

std::vector<SensitivityEntry> sensitivity_sweep(const PlantConfig& plant,
                                                const CalibrationTable& table,
                                                const ObjectModel& object_a, double coord_a,
                                                const ObjectModel& object_b, double coord_b,
                                                const ProbeConfig& base,
                                                const std::vector<double>& p0_grid_kpa,
                                                const std::vector<double>& dc_grid_mm) {
  PlantConfig quiet = plant;
  quiet.sensor = plant.sensor.noise_free();
  const double sigma = plant.sensor.sigma_kpa();

  std::vector<SensitivityEntry> entries;
  for (double p0 : p0_grid_kpa) {
    for (double dc : dc_grid_mm) {
      ProbeConfig config = base;
      config.p0_kpa = p0;
      config.probe_step_mm = dc / config.n_probe_steps;
      config.contact_threshold_kpa.reset();

      GripperSim sim_a(quiet, object_a, coord_a, config.step_time_s);
      GripperSim sim_b(quiet, object_b, coord_b, config.step_time_s);
      const ProbeReport ra = run_probe(sim_a, table, config);
      const ProbeReport rb = run_probe(sim_b, table, config);

      SensitivityEntry e;
      e.p0_kpa = p0;
      e.closing_distance_mm = dc;
      e.flagged = ra.flags.any() || rb.flags.any();
      if (!ra.dp_trace.empty() && !rb.dp_trace.empty()) {
        e.dp_a_kpa = ra.dp_trace.back().second;
        e.dp_b_kpa = rb.dp_trace.back().second;
        e.separation_kpa = std::abs(e.dp_a_kpa - e.dp_b_kpa);
        e.score = sigma > 0.0 ? e.separation_kpa / sigma : e.separation_kpa;
      }
      entries.push_back(e);
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const SensitivityEntry& x, const SensitivityEntry& y) {
                     if (x.flagged != y.flagged) return !x.flagged;
                     return x.score > y.score;
                   });
  return entries;
}

}  // namespace gripsim
