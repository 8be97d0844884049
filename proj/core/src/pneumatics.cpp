#include "gripsim/pneumatics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gripsim/errors.hpp"

namespace gripsim {

void RingModel::validate(double alpha_max_rad) const {
  if (!(v0_mm3 > 0.0)) throw DomainError("ring volume v0 must be positive");
  if (!(kappa_per_rad >= 0.0 && kappa_per_rad * alpha_max_rad < 1.0)) {
    throw DomainError("kappa must satisfy 0 <= kappa * alpha_max < 1");
  }
  if (!(alpha_slack_rad >= 0.0 && alpha_slack_rad <= deg_to_rad(30.0))) {
    throw DomainError("alpha_slack must lie in [0, 30] deg");
  }
  if (!(c1_nmm_per_rad >= 0.0 && c2_nmm_per_rad_kpa >= 0.0)) {
    throw DomainError("torque coefficients must be non-negative");
  }
  if (!(p_atm_kpa > 0.0)) throw DomainError("atmospheric pressure must be positive");
  if (!(leak_rate_per_s >= 0.0)) throw DomainError("leak rate must be non-negative");
}

RingState RingState::regulated(double p_gauge_kpa) {
  if (!(p_gauge_kpa >= 0.0)) throw DomainError("gauge pressure must be non-negative");
  RingState state;
  state.p_gauge_kpa = p_gauge_kpa;
  return state;
}

void SensorModel::validate() const {
  if (!(full_scale_kpa > 0.0)) throw DomainError("sensor full scale must be positive");
  if (!(noise_frac >= 0.0)) throw DomainError("sensor noise fraction must be non-negative");
  if (!(quant_step_kpa >= 0.0)) throw DomainError("sensor quantisation step must be non-negative");
}

SensorModel SensorModel::noise_free() const {
  SensorModel quiet = *this;
  quiet.noise_frac = 0.0;
  quiet.quant_step_kpa = 0.0;
  return quiet;
}

double volume_at_angle(const RingModel& model, double alpha_rad) {
  if (!(alpha_rad >= 0.0)) throw DomainError("bending angle must be non-negative");
  const double fraction = 1.0 - model.kappa_per_rad * alpha_rad;
  if (!(fraction > 0.0)) throw DomainError("bending angle collapses the ring volume");
  return model.v0_mm3 * fraction;
}

RingState lock(const RingState& state, const RingModel& model) {
  if (state.locked) throw StateError("ring valve is already locked");
  RingState locked = state;
  locked.locked = true;
  locked.nv_const = (state.p_gauge_kpa + model.p_atm_kpa) * volume_at_angle(model, state.alpha_rad);
  return locked;
}

double pressure_at_angle(const RingState& state, const RingModel& model, double alpha_rad) {
  if (!state.locked) throw StateError("pressure_at_angle needs a locked ring");
  return state.nv_const / volume_at_angle(model, alpha_rad) - model.p_atm_kpa;
}

RingState bend_to(const RingState& state, const RingModel& model, double alpha_rad) {
  RingState next = state;
  next.alpha_rad = alpha_rad;
  next.p_gauge_kpa = pressure_at_angle(state, model, alpha_rad);
  return next;
}

double joint_torque(const RingModel& model, double alpha_rad, double p_gauge_kpa) {
  const double engaged = std::max(0.0, alpha_rad - model.alpha_slack_rad);
  return (model.c1_nmm_per_rad + model.c2_nmm_per_rad_kpa * p_gauge_kpa) * engaged;
}

RingState leak_step(const RingState& state, const RingModel& model, double dt_s) {
  if (!state.locked) throw StateError("leak_step needs a locked ring");
  if (!(dt_s >= 0.0)) throw DomainError("time step must be non-negative");
  if (model.leak_rate_per_s == 0.0 || dt_s == 0.0) return state;
  RingState next = state;
  const double floor_nv = model.p_atm_kpa * volume_at_angle(model, state.alpha_rad);
  const double decay = std::max(0.0, 1.0 - model.leak_rate_per_s * dt_s);
  next.nv_const = std::max(floor_nv, state.nv_const * decay);
  next.p_gauge_kpa = pressure_at_angle(next, model, state.alpha_rad);
  return next;
}

double quantize(double value, double step) {
  if (!(step > 0.0)) return value;
  return step * std::floor(value / step + 0.5);
}

PressureSensor::PressureSensor(const SensorModel& model) : model_(model), rng_(model.seed) {
  model_.validate();
}

double PressureSensor::read(double p_true_kpa) {
  double reading = p_true_kpa;
  const double sigma = model_.sigma_kpa();
  if (sigma > 0.0) reading += sigma * unit_normal_(rng_);
  return quantize(reading, model_.quant_step_kpa);
}

double PressureSensor::settle_read(double p_true_kpa, int n) {
  if (n < 1) throw DomainError("settle read count must be at least 1");
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += read(p_true_kpa);
  return sum / n;
}

}  // namespace gripsim
