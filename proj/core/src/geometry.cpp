#include "gripsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gripsim/errors.hpp"

namespace gripsim {
namespace {

void check_joint_range(const FingerGeometry& geom, double alpha_rad) {
  if (!(alpha_rad >= 0.0 && alpha_rad <= geom.alpha_max_rad)) {
    throw DomainError("bending angle " + std::to_string(rad_to_deg(alpha_rad)) +
                      " deg outside joint range [0, " +
                      std::to_string(rad_to_deg(geom.alpha_max_rad)) + "] deg");
  }
}

}  // namespace

FingerGeometry FingerGeometry::make(double a_mm, double b_mm, double total_length_mm,
                                    double alpha_max_deg, double tip_arm_mm) {
  FingerGeometry geom;
  geom.a_mm = a_mm;
  geom.b_mm = b_mm;
  geom.beta_rad = std::atan2(a_mm, b_mm);
  geom.total_length_mm = total_length_mm;
  geom.alpha_max_rad = deg_to_rad(alpha_max_deg);
  geom.tip_arm_mm = tip_arm_mm;
  geom.validate();
  return geom;
}

double FingerGeometry::radius_mm() const { return std::hypot(a_mm, b_mm); }

void FingerGeometry::validate() const {
  if (!(a_mm > 0.0)) throw DomainError("finger dimension a must be positive");
  if (!(b_mm > 0.0)) throw DomainError("finger dimension b must be positive");
  if (!(total_length_mm > 0.0)) throw DomainError("finger total length must be positive");
  if (!(alpha_max_rad > 0.0 && alpha_max_rad <= deg_to_rad(80.0))) {
    throw DomainError("joint limit must lie in (0, 80] deg");
  }
  if (!(tip_arm_mm > 0.0)) throw DomainError("tip arm must be positive");
  if (!std::isfinite(beta_rad)) throw DomainError("design angle must be finite");
}

Pose2D end_effector_pose(const FingerGeometry& geom, const Pose2D& origin, double alpha_rad) {
  check_joint_range(geom, alpha_rad);
  const double r = geom.radius_mm();
  const double phase = alpha_rad - geom.beta_rad;
  return Pose2D{origin.x_mm + r * std::sin(phase), origin.y_mm + r * std::cos(phase),
                wrap_angle(origin.yaw_rad - alpha_rad)};
}

double tip_extent(const FingerGeometry& geom, double alpha_rad) {
  check_joint_range(geom, alpha_rad);
  return geom.a_mm + geom.radius_mm() * std::sin(alpha_rad - geom.beta_rad);
}

double object_deformation(const FingerGeometry& geom, double d_c_mm, double alpha_rad) {
  if (!(d_c_mm >= 0.0)) throw DomainError("closing distance must be non-negative");
  return d_c_mm - tip_extent(geom, alpha_rad);
}

double alpha_for_extent(const FingerGeometry& geom, double extent_mm) {
  const double lo_extent = tip_extent(geom, 0.0);
  const double hi_extent = tip_extent(geom, geom.alpha_max_rad);
  if (extent_mm < lo_extent || extent_mm > hi_extent) {
    throw RangeError("fingertip extent " + std::to_string(extent_mm) +
                     " mm not reachable inside the joint range");
  }
  // tip_extent is monotone on the joint range whenever alpha - beta stays in
  // (-pi/2, pi/2), which holds for every valid geometry with beta = atan(a/b).
  const double s = (extent_mm - geom.a_mm) / geom.radius_mm();
  const double alpha = std::asin(std::clamp(s, -1.0, 1.0)) + geom.beta_rad;
  return std::clamp(alpha, 0.0, geom.alpha_max_rad);
}

}  // namespace gripsim
