#include "gripsim/contact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gripsim/errors.hpp"

namespace gripsim {
namespace {

constexpr double kScanStepRad = deg_to_rad(0.5);
constexpr int kMaxBisections = 200;

void validate_samples(const std::vector<std::pair<double, double>>& samples, bool angular) {
  if (samples.size() < 2) throw DomainError("a sampled stiffness profile needs at least two samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [coord, k] = samples[i];
    if (!(k > 0.0)) throw DomainError("stiffness samples must be positive");
    if (i > 0 && !(coord > samples[i - 1].first)) {
      throw DomainError("stiffness sample coordinates must be strictly increasing");
    }
    if (angular && !(coord >= 0.0 && coord <= 180.0)) {
      throw DomainError("angular coordinates must lie in [0, 180] deg");
    }
  }
}

}  // namespace

StiffnessProfile StiffnessProfile::uniform(double k_n_per_mm) {
  StiffnessProfile p;
  p.kind = ProfileKind::kUniform;
  p.base_k_n_per_mm = k_n_per_mm;
  p.validate();
  return p;
}

StiffnessProfile StiffnessProfile::linear(std::vector<std::pair<double, double>> samples) {
  StiffnessProfile p;
  p.kind = ProfileKind::kLinearPositions;
  p.samples = std::move(samples);
  p.base_k_n_per_mm = p.samples.empty() ? 0.0 : p.samples.front().second;
  p.validate();
  return p;
}

StiffnessProfile StiffnessProfile::angular(std::vector<std::pair<double, double>> samples) {
  StiffnessProfile p = linear(std::move(samples));
  p.kind = ProfileKind::kAngularPositions;
  p.validate();
  return p;
}

void StiffnessProfile::validate() const {
  switch (kind) {
    case ProfileKind::kUniform:
      if (!(base_k_n_per_mm > 0.0)) throw DomainError("stiffness must be positive");
      break;
    case ProfileKind::kLinearPositions:
      validate_samples(samples, false);
      break;
    case ProfileKind::kAngularPositions:
      validate_samples(samples, true);
      break;
  }
}

std::pair<double, double> StiffnessProfile::span() const {
  if (kind == ProfileKind::kUniform || samples.empty()) return {-INFINITY, INFINITY};
  return {samples.front().first, samples.back().first};
}

void ObjectModel::validate(double max_opening_mm) const {
  profile.validate();
  if (!(surface_offset_mm >= 0.0 && surface_offset_mm <= max_opening_mm)) {
    throw DomainError("surface offset must lie within the gripper travel");
  }
  if (damage_threshold_n && !(*damage_threshold_n > 0.0)) {
    throw DomainError("damage threshold must be positive");
  }
}

double stiffness_at(const ObjectModel& object, double coord) {
  const StiffnessProfile& p = object.profile;
  if (p.kind == ProfileKind::kUniform) return p.base_k_n_per_mm;
  const auto [lo, hi] = p.span();
  if (!(coord >= lo && coord <= hi)) {
    throw RangeError("coordinate " + std::to_string(coord) + " outside the profile span [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const auto upper = std::upper_bound(
      p.samples.begin(), p.samples.end(), coord,
      [](double c, const std::pair<double, double>& s) { return c < s.first; });
  if (upper == p.samples.end()) return p.samples.back().second;
  const auto lower = upper - 1;
  if (coord == lower->first) return lower->second;
  const double t = (coord - lower->first) / (upper->first - lower->first);
  return lower->second + t * (upper->second - lower->second);
}

double equilibrium_residual(const FingerGeometry& geom, const RingState& ring,
                            const RingModel& model, double k_o_n_per_mm, double d_c_mm,
                            double alpha_rad) {
  const double p = pressure_at_angle(ring, model, alpha_rad);
  const double delta = d_c_mm - tip_extent(geom, alpha_rad);
  return joint_torque(model, alpha_rad, p) - k_o_n_per_mm * delta * geom.tip_arm_mm;
}

EquilibriumResult solve_equilibrium(const FingerGeometry& geom, const RingState& ring,
                                    const RingModel& model, double k_o_n_per_mm, double d_c_mm) {
  if (!ring.locked) throw StateError("solve_equilibrium needs a locked ring");
  if (!(k_o_n_per_mm >= 0.0)) throw DomainError("object stiffness must be non-negative");

  EquilibriumResult result;
  const double p_rest = pressure_at_angle(ring, model, 0.0);
  if (!(d_c_mm > 0.0)) return result;  // no contact: alpha = 0, force = 0

  result.contact = true;
  if (k_o_n_per_mm * d_c_mm * geom.tip_arm_mm <= kTorqueResolutionNmm) {
    result.delta_mm = d_c_mm;
    result.force_n = k_o_n_per_mm * d_c_mm;
    return result;
  }

  auto residual = [&](double alpha) {
    return equilibrium_residual(geom, ring, model, k_o_n_per_mm, d_c_mm, alpha);
  };

  // Coarse scan for the first cell whose upper end balances or overshoots.
  const double alpha_max = geom.alpha_max_rad;
  double lo = 0.0;
  double hi = -1.0;
  for (double a = kScanStepRad;; a += kScanStepRad) {
    const double probe = std::min(a, alpha_max);
    if (residual(probe) >= 0.0) {
      hi = probe;
      break;
    }
    lo = probe;
    if (probe >= alpha_max) break;
  }

  if (hi < 0.0) {
    result.saturated = true;
    result.alpha_star_rad = alpha_max;
    result.delta_mm = d_c_mm - tip_extent(geom, alpha_max);
    result.force_n = k_o_n_per_mm * result.delta_mm;
    result.dp_kpa = pressure_at_angle(ring, model, alpha_max) - p_rest;
    return result;
  }

  for (int i = 0; i < kMaxBisections && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (residual(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  const double alpha = hi;
  const double p = pressure_at_angle(ring, model, alpha);
  result.alpha_star_rad = alpha;
  result.delta_mm = std::max(0.0, d_c_mm - tip_extent(geom, alpha));
  result.force_n = joint_torque(model, alpha, p) / geom.tip_arm_mm;
  result.dp_kpa = p - p_rest;
  return result;
}

}  // namespace gripsim
