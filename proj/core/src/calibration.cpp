#include "gripsim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gripsim/errors.hpp"
#include "gripsim/units.hpp"

namespace gripsim {
namespace {

void check_strictly_increasing(const std::vector<double>& grid, const char* name) {
  if (grid.size() < 2) {
    throw DomainError(std::string(name) + " grid needs at least two points");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw DomainError(std::string(name) + " grid has a non-finite value");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw DomainError(std::string(name) + " grid must be strictly increasing");
    }
  }
}

bool is_meta_safe(const std::string& s) {
  return s.find_first_of(";=\r\n") == std::string::npos;
}

struct Cell {
  std::size_t index;  // lower node
  double t;           // fraction toward index + 1
};

Cell locate(const std::vector<double>& grid, double x, const char* name) {
  if (!(x >= grid.front() && x <= grid.back())) {
    throw RangeError(std::string(name) + " " + std::to_string(x) + " outside calibrated range [" +
                     std::to_string(grid.front()) + ", " + std::to_string(grid.back()) + "]");
  }
  if (x == grid.back()) return {grid.size() - 2, 1.0};
  const auto upper = std::upper_bound(grid.begin(), grid.end(), x);
  const std::size_t i = static_cast<std::size_t>(upper - grid.begin()) - 1;
  return {i, (x - grid[i]) / (grid[i + 1] - grid[i])};
}

double bilinear(const CalibrationTable& table, const std::vector<double>& surface,
                double alpha_deg, double p0_kpa) {
  const Cell ca = locate(table.alpha_grid_deg(), alpha_deg, "bending angle");
  const Cell cp = locate(table.p0_grid_kpa(), p0_kpa, "initial pressure");
  const std::size_t np = table.num_p0();
  auto at = [&](std::size_t i, std::size_t j) { return surface[i * np + j]; };
  const double t = ca.t;
  const double u = cp.t;
  return (1.0 - t) * (1.0 - u) * at(ca.index, cp.index) +
         t * (1.0 - u) * at(ca.index + 1, cp.index) +
         (1.0 - t) * u * at(ca.index, cp.index + 1) + t * u * at(ca.index + 1, cp.index + 1);
}

}  // namespace

CalibrationTable CalibrationTable::create(std::vector<double> alpha_grid_deg,
                                          std::vector<double> p0_grid_kpa,
                                          std::vector<double> dp_kpa,
                                          std::vector<double> torque_nmm, TableMeta meta) {
  check_strictly_increasing(alpha_grid_deg, "alpha");
  check_strictly_increasing(p0_grid_kpa, "p0");
  const std::size_t n = alpha_grid_deg.size() * p0_grid_kpa.size();
  if (dp_kpa.size() != n || torque_nmm.size() != n) {
    throw DomainError("surface dimensions do not match the grids");
  }
  const std::size_t np = p0_grid_kpa.size();
  for (std::size_t j = 0; j < np; ++j) {
    if (alpha_grid_deg.front() == 0.0 && dp_kpa[j] != 0.0) {
      throw DomainError("pressure change must be zero at alpha = 0");
    }
    for (std::size_t i = 1; i < alpha_grid_deg.size(); ++i) {
      if (dp_kpa[i * np + j] < dp_kpa[(i - 1) * np + j]) {
        throw DomainError("pressure change must be non-decreasing in alpha");
      }
    }
  }
  for (const auto& [key, value] : meta) {
    if (key.empty() || !is_meta_safe(key) || !is_meta_safe(value)) {
      throw DomainError("meta entry '" + key + "' contains a reserved character");
    }
  }
  CalibrationTable table;
  table.alpha_grid_deg_ = std::move(alpha_grid_deg);
  table.p0_grid_kpa_ = std::move(p0_grid_kpa);
  table.dp_kpa_ = std::move(dp_kpa);
  table.torque_nmm_ = std::move(torque_nmm);
  table.meta_ = std::move(meta);
  return table;
}

std::string CalibrationTable::meta_value(const std::string& key) const {
  for (const auto& [k, v] : meta_) {
    if (k == key) return v;
  }
  return {};
}

std::vector<double> make_grid(double min, double max, double step, const std::string& key) {
  if (!(step > 0.0)) throw ConfigError(key, "grid step must be positive");
  if (!(max >= min)) throw ConfigError(key, "grid maximum is below its minimum");
  const auto intervals = static_cast<long>(std::floor((max - min) / step + 1e-9));
  if (intervals < 1) throw ConfigError(key, "grid needs at least two points");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(intervals) + 1);
  for (long i = 0; i <= intervals; ++i) grid.push_back(min + static_cast<double>(i) * step);
  return grid;
}

CalibrationTable generate_regulated_sweep(const PlantConfig& plant,
                                          const RegulatedSweepSpec& spec) {
  plant.validate();
  auto alpha = make_grid(spec.alpha_min_deg, spec.alpha_max_deg, spec.alpha_step_deg,
                         "calibration.regulated.alpha");
  auto pressure = make_grid(spec.p_min_kpa, spec.p_max_kpa, spec.p_step_kpa,
                            "calibration.regulated.pressure");
  std::vector<double> torque;
  torque.reserve(alpha.size() * pressure.size());
  for (double a : alpha) {
    const double alpha_rad = deg_to_rad(a);
    if (alpha_rad > plant.geometry.alpha_max_rad) {
      throw ConfigError("calibration.regulated.alpha_max_deg", "exceeds the finger joint limit");
    }
    for (double p : pressure) torque.push_back(joint_torque(plant.ring, alpha_rad, p));
  }
  std::vector<double> dp(torque.size(), 0.0);
  TableMeta meta = {
      {"mode", "regulated"},
      {"alpha_deg", format_double(spec.alpha_min_deg) + ":" + format_double(spec.alpha_step_deg) +
                        ":" + format_double(spec.alpha_max_deg)},
      {"p_kpa", format_double(spec.p_min_kpa) + ":" + format_double(spec.p_step_kpa) + ":" +
                    format_double(spec.p_max_kpa)},
      {"plant", plant_fingerprint(plant)},
      {"created", spec.created},
  };
  return CalibrationTable::create(std::move(alpha), std::move(pressure), std::move(dp),
                                  std::move(torque), std::move(meta));
}

CalibrationTable generate_locked_sweep(const PlantConfig& plant, const LockedSweepSpec& spec) {
  plant.validate();
  auto alpha = make_grid(0.0, spec.alpha_max_deg, spec.alpha_step_deg,
                         "calibration.locked.alpha");
  if (deg_to_rad(alpha.back()) > plant.geometry.alpha_max_rad) {
    throw ConfigError("calibration.locked.alpha_max_deg", "exceeds the finger joint limit");
  }
  std::vector<double> p0 = spec.p0_kpa;
  if (p0.size() < 2) throw ConfigError("calibration.locked.p0_kpa", "needs at least two pressures");
  for (std::size_t j = 0; j < p0.size(); ++j) {
    if (!(p0[j] >= 0.0) || (j > 0 && !(p0[j] > p0[j - 1]))) {
      throw ConfigError("calibration.locked.p0_kpa",
                        "pressures must be non-negative and strictly increasing");
    }
  }
  const std::size_t np = p0.size();
  std::vector<double> dp(alpha.size() * np);
  std::vector<double> torque(alpha.size() * np);
  for (std::size_t j = 0; j < np; ++j) {
    const RingState locked = lock(RingState::regulated(p0[j]), plant.ring);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      const double alpha_rad = deg_to_rad(alpha[i]);
      const double p = pressure_at_angle(locked, plant.ring, alpha_rad);
      // The ring sits exactly at p0 before bending; avoid round-off in nv/V - p_atm.
      dp[i * np + j] = (i == 0) ? 0.0 : std::max(0.0, p - locked.p_gauge_kpa);
      torque[i * np + j] = joint_torque(plant.ring, alpha_rad, locked.p_gauge_kpa + dp[i * np + j]);
    }
  }
  std::string p0_list;
  for (std::size_t j = 0; j < np; ++j) {
    if (j > 0) p0_list.push_back(',');
    p0_list += format_double(p0[j]);
  }
  TableMeta meta = {
      {"mode", "locked"},
      {"alpha_deg", "0:" + format_double(spec.alpha_step_deg) + ":" + format_double(spec.alpha_max_deg)},
      {"p0_kpa", p0_list},
      {"plant", plant_fingerprint(plant)},
      {"created", spec.created},
  };
  return CalibrationTable::create(std::move(alpha), std::move(p0), std::move(dp), std::move(torque),
                                  std::move(meta));
}

HysteresisTrace simulate_hysteresis(const PlantConfig& plant, double p0_kpa,
                                    double alpha_step_deg, double alpha_max_deg, double dwell_s) {
  plant.validate();
  const auto alpha = make_grid(0.0, alpha_max_deg, alpha_step_deg, "calibration.locked.alpha");
  HysteresisTrace trace;
  trace.p0_kpa = p0_kpa;
  trace.alpha_deg = alpha;
  trace.forward_kpa.resize(alpha.size());
  trace.backward_kpa.resize(alpha.size());
  trace.forward_torque_nmm.resize(alpha.size());
  trace.backward_torque_nmm.resize(alpha.size());

  RingState state = lock(RingState::regulated(p0_kpa), plant.ring);
  auto visit = [&](std::size_t i, std::vector<double>& p_out, std::vector<double>& tau_out) {
    const double alpha_rad = deg_to_rad(alpha[i]);
    state = bend_to(state, plant.ring, alpha_rad);
    p_out[i] = state.p_gauge_kpa;
    tau_out[i] = joint_torque(plant.ring, alpha_rad, state.p_gauge_kpa);
    state = leak_step(state, plant.ring, dwell_s);
  };
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    visit(i, trace.forward_kpa, trace.forward_torque_nmm);
  }
  // The return sweep starts from the turnaround angle.
  for (std::size_t k = alpha.size(); k-- > 0;) {
    visit(k, trace.backward_kpa, trace.backward_torque_nmm);
  }
  return trace;
}

double interp_dp(const CalibrationTable& table, double alpha_deg, double p0_kpa) {
  return bilinear(table, table.dp_surface(), alpha_deg, p0_kpa);
}

double interp_torque(const CalibrationTable& table, double alpha_deg, double p0_kpa) {
  return bilinear(table, table.torque_surface(), alpha_deg, p0_kpa);
}

double angle_from_dp(const CalibrationTable& table, double dp_kpa, double p0_kpa) {
  if (!(dp_kpa >= 0.0)) throw DomainError("pressure change must be non-negative");
  const Cell cp = locate(table.p0_grid_kpa(), p0_kpa, "initial pressure");
  const auto& alpha = table.alpha_grid_deg();
  auto curve = [&](std::size_t i) {
    return (1.0 - cp.t) * table.dp_at(i, cp.index) + cp.t * table.dp_at(i, cp.index + 1);
  };
  if (dp_kpa > curve(alpha.size() - 1)) {
    throw SaturationError("pressure change " + std::to_string(dp_kpa) +
                          " kPa exceeds the calibrated maximum for p0 = " +
                          std::to_string(p0_kpa) + " kPa");
  }
  // Bisection over node indices for the first node whose curve value reaches dp.
  std::size_t lo = 0;
  std::size_t hi = alpha.size() - 1;
  if (curve(0) >= dp_kpa) return alpha.front();
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (curve(mid) >= dp_kpa) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double c_lo = curve(lo);
  const double c_hi = curve(hi);
  if (dp_kpa == c_hi) return alpha[hi];
  const double t = (dp_kpa - c_lo) / (c_hi - c_lo);
  return alpha[lo] + t * (alpha[hi] - alpha[lo]);
}

double force_from_dp(const CalibrationTable& table, const FingerGeometry& geom, double dp_kpa,
                     double p0_kpa) {
  const double alpha_deg = angle_from_dp(table, dp_kpa, p0_kpa);
  return interp_torque(table, alpha_deg, p0_kpa) / geom.tip_arm_mm;
}

double linear_fit_r2(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("linear fit needs matching series of length >= 2");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy == 0.0) return 1.0;  // a constant series is fit exactly by a flat line
  if (sxx == 0.0) return 0.0;
  return (sxy * sxy) / (sxx * syy);
}

CalibrationSummary summarize(const CalibrationTable& regulated, const CalibrationTable& locked,
                             const HysteresisTrace& hysteresis, double fit_alpha_max_deg) {
  CalibrationSummary summary;

  // Dead zone: the zero-pressure column may legitimately carry torque, so it
  // is measured on every pressure above the first grid value.
  const std::size_t j_start = regulated.num_p0() > 1 ? 1 : 0;
  for (std::size_t i = 0; i < regulated.num_alpha(); ++i) {
    bool all_zero = true;
    for (std::size_t j = j_start; j < regulated.num_p0(); ++j) {
      if (regulated.torque_at(i, j) != 0.0) all_zero = false;
    }
    if (!all_zero) break;
    summary.dead_zone_extent_deg = regulated.alpha_grid_deg()[i];
  }

  for (std::size_t j = 0; j < locked.num_p0(); ++j) {
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < locked.num_alpha(); ++i) {
      if (locked.alpha_grid_deg()[i] > fit_alpha_max_deg) break;
      x.push_back(locked.alpha_grid_deg()[i]);
      y.push_back(locked.dp_at(i, j));
    }
    summary.dp_fit_r2.emplace_back(locked.p0_grid_kpa()[j], linear_fit_r2(x, y));
  }

  summary.hysteresis_p0_kpa = hysteresis.p0_kpa;
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < hysteresis.alpha_deg.size(); ++i) {
    const double gap = hysteresis.forward_kpa[i] - hysteresis.backward_kpa[i];
    summary.hysteresis_max_gap_kpa = std::max(summary.hysteresis_max_gap_kpa, gap);
    total += gap;
    ++count;
  }
  summary.hysteresis_mean_gap_kpa = count > 0 ? total / static_cast<double>(count) : 0.0;
  return summary;
}

}  // namespace gripsim
