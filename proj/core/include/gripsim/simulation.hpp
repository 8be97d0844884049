#pragma once

#include <cstdint>
#include <optional>

#include "gripsim/contact.hpp"
#include "gripsim/plant.hpp"

namespace gripsim {

/// One instrumented finger closing onto (at most) one object location.
///
/// The gripper is commanded by opening width; the finger settles to its
/// quasi-static equilibrium after every move. Each move also lets
/// `step_time_s` pass, during which a locked ring leaks. Owns its sensor
/// noise stream, so one instance must stay on one thread.
class GripperSim {
 public:
  /// `object` absent means an empty workspace. `coord` selects the location
  /// on a sampled stiffness profile.
  GripperSim(const PlantConfig& plant, std::optional<ObjectModel> object, double coord,
             double step_time_s = 1.0);

  /// Opens fully, vents and re-pressurises the ring to `p0_kpa`, then closes
  /// the valve.
  void reset_and_lock(double p0_kpa);

  /// Moves to `opening_mm` (clamped to [0, max_opening]) and settles.
  void move_to(double opening_mm);

  double read_pressure();
  double settle_read(int n);

  double opening_mm() const { return opening_mm_; }
  double max_opening_mm() const { return plant_.max_opening_mm; }
  const RingState& ring() const { return ring_; }
  const EquilibriumResult& equilibrium() const { return equilibrium_; }
  const PlantConfig& plant() const { return plant_; }
  const std::optional<ObjectModel>& object() const { return object_; }
  /// Stiffness at the probed location, or 0 for an empty workspace.
  double local_stiffness() const { return k_local_; }

 private:
  PlantConfig plant_;
  std::optional<ObjectModel> object_;
  double k_local_ = 0.0;
  double step_time_s_;
  PressureSensor sensor_;
  RingState ring_;
  EquilibriumResult equilibrium_;
  double opening_mm_;
};

}  // namespace gripsim
