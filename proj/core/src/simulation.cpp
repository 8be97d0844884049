#include "gripsim/simulation.hpp"

#include <algorithm>

#include "gripsim/errors.hpp"

namespace gripsim {

GripperSim::GripperSim(const PlantConfig& plant, std::optional<ObjectModel> object, double coord,
                       double step_time_s)
    : plant_(plant),
      object_(std::move(object)),
      step_time_s_(step_time_s),
      sensor_(plant.sensor),
      opening_mm_(plant.max_opening_mm) {
  plant_.validate();
  if (!(step_time_s_ >= 0.0)) throw DomainError("step time must be non-negative");
  if (object_) {
    object_->validate(plant_.max_opening_mm);
    k_local_ = stiffness_at(*object_, coord);
  }
}

void GripperSim::reset_and_lock(double p0_kpa) {
  opening_mm_ = plant_.max_opening_mm;
  equilibrium_ = EquilibriumResult{};
  ring_ = lock(RingState::regulated(p0_kpa), plant_.ring);
  move_to(opening_mm_);
}

void GripperSim::move_to(double opening_mm) {
  if (!ring_.locked) throw StateError("ring must be pressurised and locked before moving");
  opening_mm_ = std::clamp(opening_mm, 0.0, plant_.max_opening_mm);
  const double penetration = object_ ? object_->surface_offset_mm - opening_mm_ : 0.0;
  if (object_ && penetration > 0.0) {
    equilibrium_ = solve_equilibrium(plant_.geometry, ring_, plant_.ring, k_local_, penetration);
  } else {
    equilibrium_ = EquilibriumResult{};
  }
  ring_ = bend_to(ring_, plant_.ring, equilibrium_.alpha_star_rad);
  ring_ = leak_step(ring_, plant_.ring, step_time_s_);
}

double GripperSim::read_pressure() { return sensor_.read(ring_.p_gauge_kpa); }

double GripperSim::settle_read(int n) { return sensor_.settle_read(ring_.p_gauge_kpa, n); }

}  // namespace gripsim
