#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gripsim/geometry.hpp"
#include "gripsim/pneumatics.hpp"

namespace gripsim {

enum class ProfileKind { kUniform, kLinearPositions, kAngularPositions };

/// Spatial stiffness of an object. Sampled kinds interpolate linearly
/// between (coordinate, stiffness) samples; coordinates are mm along the
/// object for linear profiles and degrees about its centre for angular ones.
struct StiffnessProfile {
  ProfileKind kind = ProfileKind::kUniform;
  double base_k_n_per_mm = 1.0;
  std::vector<std::pair<double, double>> samples;

  static StiffnessProfile uniform(double k_n_per_mm);
  static StiffnessProfile linear(std::vector<std::pair<double, double>> samples);
  static StiffnessProfile angular(std::vector<std::pair<double, double>> samples);

  void validate() const;
  /// Coordinate span of a sampled profile.
  std::pair<double, double> span() const;
};

/// Linear-spring object. First contact happens when the gripper opening
/// reaches `surface_offset_mm`.
struct ObjectModel {
  StiffnessProfile profile;
  double surface_offset_mm = 40.0;
  std::optional<double> damage_threshold_n;

  void validate(double max_opening_mm) const;
};

/// Stiffness at a coordinate. Uniform profiles accept any coordinate;
/// sampled profiles throw RangeError outside their span.
double stiffness_at(const ObjectModel& object, double coord);

struct EquilibriumResult {
  double alpha_star_rad = 0.0;
  double force_n = 0.0;
  double delta_mm = 0.0;
  double dp_kpa = 0.0;   ///< Ring pressure change relative to the unbent locked state.
  bool contact = false;
  bool saturated = false;  ///< Finger pinned at its joint limit; the spring still wins.
};

/// Balance residual in N*mm: joint torque minus spring moment about the joint.
/// Positive once the finger has bent far enough to hold the object.
double equilibrium_residual(const FingerGeometry& geom, const RingState& ring,
                            const RingModel& model, double k_o_n_per_mm, double d_c_mm,
                            double alpha_rad);

/// Torque imbalance treated as balance. Below it the object cannot move the
/// finger at all.
inline constexpr double kTorqueResolutionNmm = 1e-6;

/// Quasi-static equilibrium of one finger closing `d_c_mm` past first
/// contact onto a linear spring of stiffness `k_o_n_per_mm`. The opposing
/// finger is a rigid support. Requires a locked ring (StateError otherwise).
///
/// The first sign change of the residual on [0, alpha_max] is bracketed by a
/// coarse scan and refined by bisection. Inside the fabric dead zone the joint
/// yields freely, so the root there is where the fingertip just stops
/// deforming the object. When no sign change exists the finger is pinned at
/// its joint limit and the result is marked saturated.
EquilibriumResult solve_equilibrium(const FingerGeometry& geom, const RingState& ring,
                                    const RingModel& model, double k_o_n_per_mm, double d_c_mm);

}  // namespace gripsim
