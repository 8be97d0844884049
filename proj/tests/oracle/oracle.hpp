#pragma once

// Independent reference implementations used only by tests. They re-derive
// the plant physics from raw parameters instead of calling the library, so
// a shared bug cannot make both sides agree.

#include <cstdint>
#include <functional>
#include <vector>

#include "gripsim/contact.hpp"
#include "gripsim/plant.hpp"

namespace gripsim::oracle {

struct BruteForceResult {
  double alpha_rad = 0.0;  ///< Midpoint of the first sign-change cell.
  double force_n = 0.0;    ///< Torque / tip arm at the in-cell secant root.
  double delta_mm = 0.0;
  double dp_kpa = 0.0;
  bool contact = false;
  bool saturated = false;
};

/// Scans the balance residual on a `step_deg` grid over the joint range
/// for a ring locked at `p0_kpa` with the finger at rest.
BruteForceResult bruteforce_equilibrium(const PlantConfig& plant, double p0_kpa, double k_n_per_mm,
                                        double d_c_mm, double step_deg = 0.001);

/// Pressure change after bending a ring locked at `p0_kpa` from 0 to
/// `alpha_deg`, by RK4 integration of V dP + P dV = 0 in `step_deg` steps.
double mass_balance_dp(const RingModel& ring, double p0_kpa, double alpha_deg, double step_deg = 0.01);

/// Fingertip x-extent straight from the arc formula.
double extent_formula(double a, double b, double alpha_rad);

/// Upper bound on the bilinear interpolation error of `f` over the grids:
/// (h_x^2/8) max|f_xx| + (h_y^2/8) max|f_yy| + (h_x h_y / 4) max|f_xy|, with
/// the derivatives estimated by second differences on a refined grid.
double bilinear_error_bound(const std::function<double(double, double)>& f,
                            const std::vector<double>& xs, const std::vector<double>& ys,
                            int refine = 8);

/// Errors (deg) of angle inversions of one noisy reading per seed: for each
/// seed, dp_true plus Gaussian noise of `sigma_kpa` is inverted by `invert`.
std::vector<double> monte_carlo_angle_errors(const std::function<double(double)>& invert,
                                             double alpha_true_deg, double dp_true_kpa,
                                             double sigma_kpa, int seeds);

}  // namespace gripsim::oracle
