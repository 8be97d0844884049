#pragma once

#include <cstdint>
#include <random>

#include "gripsim/units.hpp"

namespace gripsim {

/// Soft ring around the finger joint.
///
/// The cavity volume shrinks linearly as the fingertip bends into it. Joint
/// torque is bilinear in (bend beyond slack, gauge pressure); below
/// `alpha_slack_rad` the fabric layer is loose and the ring exerts no torque.
/// With default coefficients the torque reaches 450 N*mm at 80 deg and
/// 150 kPa regulated pressure.
struct RingModel {
  double v0_mm3 = 5000.0;
  double kappa_per_rad = 0.15;
  double alpha_slack_rad = deg_to_rad(20.0);
  double c1_nmm_per_rad = 129.718;
  double c2_nmm_per_rad_kpa = 2.0;
  double p_atm_kpa = kStandardAtmosphereKpa;
  double leak_rate_per_s = 0.0;

  /// Throws DomainError on a violated invariant. `alpha_max_rad` is the
  /// finger's joint limit, needed to check that the volume stays positive.
  void validate(double alpha_max_rad) const;
};

/// Ring pressure state. `nv_const` is the conserved P_abs * V product while
/// the valve is closed; it is only meaningful when `locked` is set.
struct RingState {
  double p_gauge_kpa = 0.0;
  double alpha_rad = 0.0;
  bool locked = false;
  double nv_const = 0.0;

  /// Unlocked ring held by the regulator at `p_gauge_kpa` with the finger at rest.
  static RingState regulated(double p_gauge_kpa);
};

/// Pressure sensor observation parameters. Noise is Gaussian with standard
/// deviation `noise_frac * full_scale_kpa`; readings are then rounded
/// half-up to `quant_step_kpa` (0 disables quantisation).
struct SensorModel {
  double full_scale_kpa = 700.0;
  double noise_frac = 0.025 / 3.0;
  double quant_step_kpa = 0.68;
  std::uint64_t seed = 0;

  double sigma_kpa() const { return noise_frac * full_scale_kpa; }
  void validate() const;
  /// Same sensor with noise and quantisation switched off.
  SensorModel noise_free() const;
};

double volume_at_angle(const RingModel& model, double alpha_rad);

/// Closes the valve. Throws StateError if already locked.
RingState lock(const RingState& state, const RingModel& model);

/// Gauge pressure of a locked ring after bending to `alpha_rad` (isothermal).
double pressure_at_angle(const RingState& state, const RingModel& model, double alpha_rad);

/// Moves a locked ring to a new angle, updating the stored gauge pressure.
RingState bend_to(const RingState& state, const RingModel& model, double alpha_rad);

double joint_torque(const RingModel& model, double alpha_rad, double p_gauge_kpa);

/// Loses `leak_rate * dt` of the trapped gas. The gas quantity is floored so
/// the ring never drops below atmospheric pressure at its current angle.
RingState leak_step(const RingState& state, const RingModel& model, double dt_s);

/// Rounds half-up to a multiple of `step`; step <= 0 returns `value`.
double quantize(double value, double step);

/// Seeded sensor. A fixed seed and call sequence give identical readings.
class PressureSensor {
 public:
  explicit PressureSensor(const SensorModel& model);

  double read(double p_true_kpa);
  /// Mean of `n` consecutive reads.
  double settle_read(double p_true_kpa, int n);
  const SensorModel& model() const { return model_; }

 private:
  SensorModel model_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_normal_{0.0, 1.0};
};

}  // namespace gripsim
