#include "gripsim/plant.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string_view>

#include "gripsim/errors.hpp"

namespace gripsim {

void PlantConfig::validate() const {
  geometry.validate();
  ring.validate(geometry.alpha_max_rad);
  sensor.validate();
  if (!(max_opening_mm > 0.0)) throw DomainError("gripper max opening must be positive");
}

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string plant_fingerprint(const PlantConfig& plant) {
  std::string text;
  auto add = [&text](std::string_view name, double v) {
    text.append(name);
    text.push_back('=');
    text.append(format_double(v));
    text.push_back(';');
  };
  const auto& g = plant.geometry;
  add("a", g.a_mm);
  add("b", g.b_mm);
  add("beta", g.beta_rad);
  add("total_length", g.total_length_mm);
  add("alpha_max", g.alpha_max_rad);
  add("tip_arm", g.tip_arm_mm);
  const auto& r = plant.ring;
  add("v0", r.v0_mm3);
  add("kappa", r.kappa_per_rad);
  add("alpha_slack", r.alpha_slack_rad);
  add("c1", r.c1_nmm_per_rad);
  add("c2", r.c2_nmm_per_rad_kpa);
  add("p_atm", r.p_atm_kpa);
  add("leak_rate", r.leak_rate_per_s);
  add("max_opening", plant.max_opening_mm);
  return fnv1a_hex(text);
}

}  // namespace gripsim
