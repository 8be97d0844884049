#pragma once

#include <cmath>
#include <numbers>

namespace gripsim {

// Angles are radians inside the library; degrees only at file and CLI
// boundaries. Every conversion goes through these two functions so that a
// grid angle converted twice lands on the same bit pattern.
constexpr double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / std::numbers::pi); }

/// Standard atmosphere in kPa.
inline constexpr double kStandardAtmosphereKpa = 101.325;

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double rad) {
  double wrapped = std::remainder(rad, 2.0 * std::numbers::pi);
  if (wrapped <= -std::numbers::pi) wrapped += 2.0 * std::numbers::pi;
  return wrapped;
}

}  // namespace gripsim
