#pragma once

#include <string>

#include "gripsim/geometry.hpp"
#include "gripsim/pneumatics.hpp"

namespace gripsim {

/// Everything that defines the simulated hardware.
struct PlantConfig {
  FingerGeometry geometry = FingerGeometry::make_default();
  RingModel ring;
  SensorModel sensor;
  double max_opening_mm = 100.0;  ///< Gripper opening when fully open.

  void validate() const;
};

/// Stable 64-bit FNV-1a digest (hex) of every plant parameter at full
/// precision. Used to tie calibration tables to the plant that produced them.
std::string plant_fingerprint(const PlantConfig& plant);

/// FNV-1a 64 over raw bytes, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace gripsim
