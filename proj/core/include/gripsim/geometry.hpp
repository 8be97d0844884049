#pragma once

#include "gripsim/units.hpp"

namespace gripsim {

/// Rigid two-link finger. The fingertip link pivots about the joint axis O;
/// `a` and `b` locate the fingertip contact point relative to O and `beta`
/// is the design angle between the link and that contact point.
struct FingerGeometry {
  double a_mm = 15.0;
  double b_mm = 40.0;
  double beta_rad = 0.0;  ///< Set by make(); atan(a/b) unless overridden.
  double total_length_mm = 80.0;
  double alpha_max_rad = deg_to_rad(80.0);
  double tip_arm_mm = 40.0;  ///< Moment arm of the fingertip contact about O.

  /// Builds a geometry with beta = atan(a/b), so that tip_extent(0) == 0.
  static FingerGeometry make(double a_mm, double b_mm, double total_length_mm = 80.0,
                             double alpha_max_deg = 80.0, double tip_arm_mm = 40.0);
  static FingerGeometry make_default() { return make(15.0, 40.0); }

  /// Distance from the joint axis to the fingertip contact point.
  double radius_mm() const;

  /// Throws DomainError on any violated invariant.
  void validate() const;
};

struct Pose2D {
  double x_mm = 0.0;
  double y_mm = 0.0;
  double yaw_rad = 0.0;
};

/// Fingertip pose on its circular arc about the joint origin.
Pose2D end_effector_pose(const FingerGeometry& geom, const Pose2D& origin, double alpha_rad);

/// Inward x-travel of the fingertip relative to its rest position:
/// a + r sin(alpha - beta).
double tip_extent(const FingerGeometry& geom, double alpha_rad);

/// Object deformation along x for a commanded closing distance `d_c_mm`.
/// Negative results mean the fingertip has swung back past the commanded
/// closing, i.e. contact is lost.
double object_deformation(const FingerGeometry& geom, double d_c_mm, double alpha_rad);

/// Inverse of tip_extent on [0, alpha_max]. Throws RangeError when the extent
/// is not reachable inside the joint range.
double alpha_for_extent(const FingerGeometry& geom, double extent_mm);

}  // namespace gripsim
