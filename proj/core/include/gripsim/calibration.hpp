#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gripsim/geometry.hpp"
#include "gripsim/plant.hpp"

namespace gripsim {

/// Ordered provenance record. Keys and values may not contain ';', '=' or
/// line breaks, so the record survives the one-line CSV meta header as-is.
using TableMeta = std::vector<std::pair<std::string, std::string>>;

/// Gridded torque and pressure-change surfaces indexed by (bending angle,
/// initial gauge pressure). Grids are in degrees and kPa, matching the file
/// format. Surfaces are stored row-major with the angle as the outer index.
///
/// Invariants, checked by create():
///   - both grids strictly increasing with at least two points;
///   - surfaces have |alpha| * |p0| entries;
///   - the pressure change is zero at alpha = 0 and non-decreasing in alpha.
class CalibrationTable {
 public:
  static CalibrationTable create(std::vector<double> alpha_grid_deg,
                                 std::vector<double> p0_grid_kpa, std::vector<double> dp_kpa,
                                 std::vector<double> torque_nmm, TableMeta meta);

  const std::vector<double>& alpha_grid_deg() const { return alpha_grid_deg_; }
  const std::vector<double>& p0_grid_kpa() const { return p0_grid_kpa_; }
  const std::vector<double>& dp_surface() const { return dp_kpa_; }
  const std::vector<double>& torque_surface() const { return torque_nmm_; }
  const TableMeta& meta() const { return meta_; }

  std::size_t num_alpha() const { return alpha_grid_deg_.size(); }
  std::size_t num_p0() const { return p0_grid_kpa_.size(); }
  double dp_at(std::size_t i_alpha, std::size_t j_p0) const {
    return dp_kpa_[i_alpha * num_p0() + j_p0];
  }
  double torque_at(std::size_t i_alpha, std::size_t j_p0) const {
    return torque_nmm_[i_alpha * num_p0() + j_p0];
  }
  /// Value of a meta key, or empty.
  std::string meta_value(const std::string& key) const;

  bool operator==(const CalibrationTable&) const = default;

 private:
  CalibrationTable() = default;

  std::vector<double> alpha_grid_deg_;
  std::vector<double> p0_grid_kpa_;
  std::vector<double> dp_kpa_;
  std::vector<double> torque_nmm_;
  TableMeta meta_;
};

/// Regulator-held sweep: torque at constant supplied pressure, no volume
/// coupling.
struct RegulatedSweepSpec {
  double alpha_min_deg = 0.0;
  double alpha_max_deg = 80.0;
  double alpha_step_deg = 5.0;
  double p_min_kpa = 0.0;
  double p_max_kpa = 150.0;
  double p_step_kpa = 5.0;
  std::string created = "0";
};

/// Locked-air sweep: pressurise at rest, close the valve, bend in fixed steps.
struct LockedSweepSpec {
  double alpha_step_deg = 1.0;
  double alpha_max_deg = 80.0;
  std::vector<double> p0_kpa = {0.0, 20.0, 40.0, 60.0, 80.0};
  double dwell_s = 1.0;              ///< Time spent at each angle (drives leakage).
  double hysteresis_p0_kpa = 60.0;   ///< Initial pressure of the reported return sweep.
  std::string created = "0";
};

/// Evenly spaced grid from `min` to `max` inclusive. Throws ConfigError for
/// a non-positive step, max < min or fewer than two points.
std::vector<double> make_grid(double min, double max, double step, const std::string& key);

CalibrationTable generate_regulated_sweep(const PlantConfig& plant, const RegulatedSweepSpec& spec);
CalibrationTable generate_locked_sweep(const PlantConfig& plant, const LockedSweepSpec& spec);

/// Forward bend 0 -> alpha_max then return to 0 with the valve closed and
/// leakage applied at every step. Pressures are gauge, in kPa.
struct HysteresisTrace {
  double p0_kpa = 0.0;
  std::vector<double> alpha_deg;
  std::vector<double> forward_kpa;
  std::vector<double> backward_kpa;
  std::vector<double> forward_torque_nmm;
  std::vector<double> backward_torque_nmm;
};

HysteresisTrace simulate_hysteresis(const PlantConfig& plant, double p0_kpa,
                                    double alpha_step_deg, double alpha_max_deg, double dwell_s);

/// Bilinear lookups; exact at grid nodes. Throw RangeError outside the hull.
double interp_dp(const CalibrationTable& table, double alpha_deg, double p0_kpa);
double interp_torque(const CalibrationTable& table, double alpha_deg, double p0_kpa);

/// Bending angle (deg) at which the interpolated pressure-change curve for
/// `p0_kpa` first reaches `dp_kpa`. Throws DomainError for dp < 0 and
/// SaturationError above the curve's maximum.
double angle_from_dp(const CalibrationTable& table, double dp_kpa, double p0_kpa);

/// Contact force (N) implied by a locked-ring pressure change. The locked
/// table's torque column is recorded at the instantaneous ring pressure, so
/// the lookup at (alpha, p0) is already the torque at p0 + dp.
double force_from_dp(const CalibrationTable& table, const FingerGeometry& geom, double dp_kpa,
                     double p0_kpa);

std::string to_csv(const CalibrationTable& table);
CalibrationTable parse_csv(const std::string& text);
void write_csv(const CalibrationTable& table, const std::filesystem::path& path);
CalibrationTable read_csv(const std::filesystem::path& path);

/// Coefficient of determination of the least-squares line through (x, y).
double linear_fit_r2(std::span<const double> x, std::span<const double> y);

/// Headline numbers of a calibration run.
struct CalibrationSummary {
  double dead_zone_extent_deg = 0.0;  ///< Largest alpha with zero torque at every p >= first nonzero pressure.
  std::vector<std::pair<double, double>> dp_fit_r2;  ///< (p0, R^2 over alpha in [0, 60] deg).
  double hysteresis_p0_kpa = 0.0;
  double hysteresis_max_gap_kpa = 0.0;
  double hysteresis_mean_gap_kpa = 0.0;
};

CalibrationSummary summarize(const CalibrationTable& regulated, const CalibrationTable& locked,
                             const HysteresisTrace& hysteresis, double fit_alpha_max_deg = 60.0);

}  // namespace gripsim
