#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "gripsim/calibration.hpp"
#include "gripsim/errors.hpp"
#include "oracle.hpp"

namespace gripsim {
namespace {

const PlantConfig kPlant;

const CalibrationTable& locked_table() {
  static const CalibrationTable t = generate_locked_sweep(kPlant, LockedSweepSpec{});
  return t;
}

const CalibrationTable& regulated_table() {
  static const CalibrationTable t = generate_regulated_sweep(kPlant, RegulatedSweepSpec{});
  return t;
}

double plant_dp(double alpha_deg, double p0) {
  const RingState s = lock(RingState::regulated(p0), kPlant.ring);
  return pressure_at_angle(s, kPlant.ring, deg_to_rad(alpha_deg)) - p0;
}

TEST(RegulatedSweep, GridShapeAndValues) {
  const auto& t = regulated_table();
  ASSERT_EQ(t.num_alpha(), 17u);
  ASSERT_EQ(t.num_p0(), 31u);
  EXPECT_EQ(t.alpha_grid_deg().back(), 80.0);
  EXPECT_EQ(t.p0_grid_kpa().back(), 150.0);
  EXPECT_NEAR(t.torque_at(16, 30), 450.0, 0.5);
  for (double dp : t.dp_surface()) EXPECT_EQ(dp, 0.0);
  EXPECT_EQ(t.meta_value("mode"), "regulated");
}

TEST(RegulatedSweep, DeadZoneThenStrictGrowth) {
  const auto& t = regulated_table();
  for (std::size_t j = 1; j < t.num_p0(); ++j) {
    for (std::size_t i = 0; i < t.num_alpha(); ++i) {
      const double a = t.alpha_grid_deg()[i];
      if (a <= 20.0) {
        EXPECT_EQ(t.torque_at(i, j), 0.0);
      } else {
        EXPECT_GT(t.torque_at(i, j), t.torque_at(i - 1, j));
      }
    }
  }
}

TEST(RegulatedSweep, ZeroCoefficientsGiveZeroSurface) {
  PlantConfig p;
  p.ring.c1_nmm_per_rad = 0.0;
  p.ring.c2_nmm_per_rad_kpa = 0.0;
  const CalibrationTable t = generate_regulated_sweep(p, {});
  for (double tau : t.torque_surface()) EXPECT_EQ(tau, 0.0);
}

TEST(RegulatedSweep, DegenerateGridIsAConfigError) {
  RegulatedSweepSpec spec;
  spec.alpha_max_deg = 0.0;
  EXPECT_THROW(generate_regulated_sweep(kPlant, spec), ConfigError);
  spec = RegulatedSweepSpec{};
  spec.p_step_kpa = 0.0;
  EXPECT_THROW(generate_regulated_sweep(kPlant, spec), ConfigError);
  spec = RegulatedSweepSpec{};
  spec.alpha_max_deg = 85.0;
  EXPECT_THROW(generate_regulated_sweep(kPlant, spec), ConfigError);
}

TEST(LockedSweep, GridShapeAndZeroRow) {
  const auto& t = locked_table();
  ASSERT_EQ(t.num_alpha(), 81u);
  ASSERT_EQ(t.num_p0(), 5u);
  EXPECT_EQ(t.p0_grid_kpa(), (std::vector<double>{0, 20, 40, 60, 80}));
  for (std::size_t j = 0; j < t.num_p0(); ++j) EXPECT_EQ(t.dp_at(0, j), 0.0);
}

TEST(LockedSweep, FaithfulPointwiseSampling) {
  const auto& t = locked_table();
  for (std::size_t i = 0; i < t.num_alpha(); ++i) {
    for (std::size_t j = 0; j < t.num_p0(); ++j) {
      const double a = t.alpha_grid_deg()[i];
      const double p0 = t.p0_grid_kpa()[j];
      ASSERT_NEAR(t.dp_at(i, j), oracle::mass_balance_dp(kPlant.ring, p0, a), 1e-7);
      ASSERT_NEAR(t.torque_at(i, j), joint_torque(kPlant.ring, deg_to_rad(a), p0 + plant_dp(a, p0)), 1e-9);
    }
  }
}

TEST(LockedSweep, LinearityOverWorkingRange) {
  const auto& t = locked_table();
  for (std::size_t j = 0; j < t.num_p0(); ++j) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i <= 60; ++i) {
      x.push_back(t.alpha_grid_deg()[i]);
      y.push_back(t.dp_at(i, j));
    }
    EXPECT_GE(linear_fit_r2(x, y), 0.99);
  }
}

TEST(CalibrationTable, ConstructionInvariants) {
  EXPECT_THROW(CalibrationTable::create({0, 1}, {0}, {0, 0}, {0, 0}, {}), DomainError);
  EXPECT_THROW(CalibrationTable::create({0, 0}, {0, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}, {}), DomainError);
  EXPECT_THROW(CalibrationTable::create({0, 1}, {0, 1}, {0, 0, 0}, {0, 0, 0, 0}, {}), DomainError);
  EXPECT_THROW(CalibrationTable::create({0, 1}, {0, 1}, {1, 0, 2, 2}, {0, 0, 0, 0}, {}), DomainError);
  EXPECT_THROW(CalibrationTable::create({0, 1, 2}, {0, 1}, {0, 0, 2, 2, 1, 3}, std::vector<double>(6), {}),
               DomainError);
  EXPECT_THROW(CalibrationTable::create({0, 1}, {0, 1}, {0, 0, 1, 1}, {0, 0, 0, 0}, {{"a;b", "c"}}),
               DomainError);
  EXPECT_NO_THROW(CalibrationTable::create({0, 1}, {0, 1}, {0, 0, 1, 1}, {0, 0, 0, 0}, {{"k", "v"}}));
}

TEST(Interpolation, ExactAtNodes) {
  const auto& t = locked_table();
  for (std::size_t i = 0; i < t.num_alpha(); i += 7) {
    for (std::size_t j = 0; j < t.num_p0(); ++j) {
      EXPECT_EQ(interp_dp(t, t.alpha_grid_deg()[i], t.p0_grid_kpa()[j]), t.dp_at(i, j));
      EXPECT_EQ(interp_torque(t, t.alpha_grid_deg()[i], t.p0_grid_kpa()[j]), t.torque_at(i, j));
    }
  }
}

TEST(Interpolation, CellCentreIsCornerMean) {
  const auto& t = regulated_table();
  for (std::size_t i = 0; i + 1 < t.num_alpha(); i += 3) {
    for (std::size_t j = 0; j + 1 < t.num_p0(); j += 4) {
      const double a = 0.5 * (t.alpha_grid_deg()[i] + t.alpha_grid_deg()[i + 1]);
      const double p = 0.5 * (t.p0_grid_kpa()[j] + t.p0_grid_kpa()[j + 1]);
      const double mean =
          0.25 * (t.torque_at(i, j) + t.torque_at(i + 1, j) + t.torque_at(i, j + 1) + t.torque_at(i + 1, j + 1));
      EXPECT_NEAR(interp_torque(t, a, p), mean, 1e-12);
    }
  }
}

TEST(Interpolation, NoExtrapolation) {
  const auto& t = locked_table();
  EXPECT_THROW(interp_dp(t, -0.01, 20.0), RangeError);
  EXPECT_THROW(interp_dp(t, 80.01, 20.0), RangeError);
  EXPECT_THROW(interp_torque(t, 10.0, 80.5), RangeError);
  EXPECT_THROW(interp_torque(t, 10.0, -1.0), RangeError);
}

TEST(Interpolation, ContinuousAcrossCellEdges) {
  const auto& t = locked_table();
  for (double a = 1.0; a < 80.0; a += 1.0) {
    for (double p : {10.0, 33.0, 71.0}) {
      EXPECT_NEAR(interp_dp(t, std::nextafter(a, 0.0), p), interp_dp(t, std::nextafter(a, 100.0), p), 1e-9);
      EXPECT_NEAR(interp_torque(t, std::nextafter(a, 0.0), p), interp_torque(t, std::nextafter(a, 100.0), p),
                  1e-9);
    }
  }
}

TEST(Interpolation, RandomQueriesWithinResolutionBound) {
  const auto& t = locked_table();
  auto dp = [](double a, double p) { return plant_dp(a, p); };
  auto tau = [](double a, double p) {
    return joint_torque(kPlant.ring, deg_to_rad(a), p + plant_dp(a, p));
  };
  const double dp_bound = oracle::bilinear_error_bound(dp, t.alpha_grid_deg(), t.p0_grid_kpa());
  // The slack kink is not smooth; its bilinear error is bounded by the
  // one-cell slope jump times a quarter cell.
  const double kink = 0.25 * (joint_torque(kPlant.ring, deg_to_rad(21.0), 200.0));
  const double tau_bound = oracle::bilinear_error_bound(tau, t.alpha_grid_deg(), t.p0_grid_kpa()) + kink;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0.0, 80.0), up(0.0, 80.0);
  double worst_dp = 0.0, worst_tau = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const double a = ua(rng), p = up(rng);
    worst_dp = std::max(worst_dp, std::abs(interp_dp(t, a, p) - dp(a, p)));
    worst_tau = std::max(worst_tau, std::abs(interp_torque(t, a, p) - tau(a, p)));
  }
  EXPECT_LE(worst_dp, dp_bound + 1e-12);
  EXPECT_LE(worst_tau, tau_bound);
  EXPECT_GT(dp_bound, 0.0);
}

TEST(AngleFromDp, ZeroAndRoundTripAtNodes) {
  const auto& t = locked_table();
  for (double p0 : {0.0, 20.0, 50.0, 80.0}) {
    EXPECT_EQ(angle_from_dp(t, 0.0, p0), 0.0);
  }
  for (std::size_t i = 0; i < t.num_alpha(); ++i) {
    for (std::size_t j = 0; j < t.num_p0(); ++j) {
      const double a = t.alpha_grid_deg()[i];
      EXPECT_NEAR(angle_from_dp(t, interp_dp(t, a, t.p0_grid_kpa()[j]), t.p0_grid_kpa()[j]), a, 1e-3);
    }
  }
}

TEST(AngleFromDp, InverseAnywhereInHull) {
  const auto& t = locked_table();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ua(0.0, 80.0), up(0.0, 80.0);
  for (int n = 0; n < 2000; ++n) {
    const double a = ua(rng), p = up(rng);
    EXPECT_NEAR(angle_from_dp(t, interp_dp(t, a, p), p), a, 1e-3);
  }
}

TEST(AngleFromDp, Errors) {
  const auto& t = locked_table();
  EXPECT_THROW(angle_from_dp(t, -0.1, 20.0), DomainError);
  EXPECT_THROW(angle_from_dp(t, interp_dp(t, 80.0, 20.0) + 0.01, 20.0), SaturationError);
  EXPECT_THROW(angle_from_dp(t, 1.0, 90.0), RangeError);
}

TEST(AngleFromDp, NoisyReadingErrorBoundedBySlope) {
  const auto& t = locked_table();
  const double p0 = 60.0;
  const double sigma = SensorModel{}.sigma_kpa();
  const double alpha = 40.0;
  const double slope = (interp_dp(t, 41.0, p0) - interp_dp(t, 39.0, p0)) / 2.0;  // kPa/deg
  const auto errors = oracle::monte_carlo_angle_errors(
      [&](double dp) { return angle_from_dp(t, dp, p0); }, alpha, interp_dp(t, alpha, p0), sigma, 100);
  double sq = 0.0;
  for (double e : errors) {
    EXPECT_LE(std::abs(e), 4.0 * sigma / slope);
    sq += e * e;
  }
  EXPECT_LE(std::sqrt(sq / errors.size()), 1.3 * sigma / slope);
}

TEST(ForceFromDp, DeadZoneAndTipArmScaling) {
  const auto& t = locked_table();
  const FingerGeometry g = FingerGeometry::make_default();
  EXPECT_EQ(force_from_dp(t, g, 0.0, 60.0), 0.0);
  EXPECT_EQ(force_from_dp(t, g, interp_dp(t, 15.0, 60.0), 60.0), 0.0);
  const double dp = interp_dp(t, 50.0, 60.0);
  const FingerGeometry longer = FingerGeometry::make(15.0, 40.0, 80.0, 80.0, 80.0);
  EXPECT_NEAR(force_from_dp(t, longer, dp, 60.0), 0.5 * force_from_dp(t, g, dp, 60.0), 1e-12);
  // Torque is read at the instantaneous pressure p0 + dp.
  EXPECT_NEAR(force_from_dp(t, g, dp, 60.0),
              joint_torque(kPlant.ring, deg_to_rad(50.0), 60.0 + dp) / g.tip_arm_mm, 1e-6);
}

TEST(TableIo, RoundTripIsLossless) {
  for (const CalibrationTable* t : {&locked_table(), &regulated_table()}) {
    const std::string text = to_csv(*t);
    const CalibrationTable back = parse_csv(text);
    EXPECT_EQ(back, *t);
    EXPECT_EQ(to_csv(back), text);
    EXPECT_EQ(back.meta(), t->meta());
  }
}

TEST(TableIo, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "gripsim_table_io";
  std::filesystem::remove_all(dir);
  const auto path = dir / "nested" / "locked.csv";
  write_csv(locked_table(), path);
  EXPECT_EQ(read_csv(path), locked_table());
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove_all(dir);
}

std::string small_csv() {
  return "# caltab v1\n# meta: mode=test\nalpha_deg,p0_kpa,dp_kpa,torque_nmm\n"
         "0,0,0,0\n0,10,0,0\n1,0,0.5,1\n1,10,0.6,2\n2,0,1,3\n2,10,1.2,4\n";
}

TEST(TableIo, ParsesMinimalFile) {
  const CalibrationTable t = parse_csv(small_csv());
  EXPECT_EQ(t.num_alpha(), 3u);
  EXPECT_EQ(t.num_p0(), 2u);
  EXPECT_EQ(t.dp_at(2, 1), 1.2);
  EXPECT_EQ(t.meta_value("mode"), "test");
}

void expect_parse_error(const std::string& text, std::size_t line, const std::string& fragment) {
  try {
    parse_csv(text);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(TableIo, ShuffledAlphaIsRejected) {
  std::string text = small_csv();
  text.replace(text.find("1,0,0.5,1\n1,10,0.6,2\n2,0,1,3\n2,10,1.2,4\n"), std::string::npos,
               "2,0,1,3\n2,10,1.2,4\n1,0,0.5,1\n1,10,0.6,2\n");
  expect_parse_error(text, 8, "not strictly increasing");
}

TEST(TableIo, MissingHeaderTokenIsNamed) {
  std::string text = small_csv();
  text.replace(text.find("p0_kpa"), 6, "p0");
  expect_parse_error(text, 3, "p0_kpa");
}

TEST(TableIo, OtherMalformations) {
  expect_parse_error("# caltab v2\n", 1, "caltab");
  std::string bad_number = small_csv();
  bad_number.replace(bad_number.find("0.6"), 3, "0.x");
  expect_parse_error(bad_number, 7, "malformed number");
  std::string short_row = small_csv();
  short_row.replace(short_row.find("2,10,1.2,4"), 10, "2,10,1.2");
  expect_parse_error(short_row, 9, "");
  std::string missing_point = small_csv();
  missing_point.erase(missing_point.find("2,10,1.2,4\n"));
  EXPECT_THROW(parse_csv(missing_point), ParseError);
  std::string crlf = small_csv();
  crlf.replace(crlf.find('\n'), 1, "\r\n");
  EXPECT_THROW(parse_csv(crlf), ParseError);
}

TEST(TableIo, MissingFileIsAnIoError) {
  EXPECT_ANY_THROW(read_csv("/nonexistent/dir/table.csv"));
}

TEST(Hysteresis, LeakFreeSweepsCoincide) {
  const HysteresisTrace h = simulate_hysteresis(kPlant, 60.0, 1.0, 80.0, 1.0);
  for (std::size_t i = 0; i < h.alpha_deg.size(); ++i) {
    EXPECT_NEAR(h.forward_kpa[i], h.backward_kpa[i], 1e-9);
  }
}

TEST(Hysteresis, LeakPullsReturnSweepBelow) {
  PlantConfig leaky;
  leaky.ring.leak_rate_per_s = 0.002;
  const HysteresisTrace h = simulate_hysteresis(leaky, 60.0, 1.0, 80.0, 1.0);
  for (std::size_t i = 1; i + 1 < h.alpha_deg.size(); ++i) EXPECT_LT(h.backward_kpa[i], h.forward_kpa[i]);
  const auto s = summarize(regulated_table(), locked_table(), h);
  EXPECT_GT(s.hysteresis_max_gap_kpa, 0.0);
  EXPECT_GE(s.hysteresis_max_gap_kpa, s.hysteresis_mean_gap_kpa);
}

TEST(Summary, HeadlineNumbers) {
  const HysteresisTrace h = simulate_hysteresis(kPlant, 60.0, 1.0, 80.0, 1.0);
  const auto s = summarize(regulated_table(), locked_table(), h);
  EXPECT_EQ(s.dead_zone_extent_deg, 20.0);
  ASSERT_EQ(s.dp_fit_r2.size(), 5u);
  for (const auto& [p0, r2] : s.dp_fit_r2) EXPECT_GE(r2, 0.99) << p0;
  EXPECT_NEAR(s.hysteresis_max_gap_kpa, 0.0, 1e-9);
}

TEST(LinearFit, KnownValues) {
  const std::vector<double> x{0, 1, 2, 3};
  EXPECT_DOUBLE_EQ(linear_fit_r2(x, std::vector<double>{1, 3, 5, 7}), 1.0);
  EXPECT_DOUBLE_EQ(linear_fit_r2(x, std::vector<double>{2, 2, 2, 2}), 1.0);
  EXPECT_NEAR(linear_fit_r2(x, std::vector<double>{0, 1, 0, 1}), 0.2, 1e-12);
  EXPECT_THROW(linear_fit_r2(x, std::vector<double>{1}), DomainError);
}

}  // namespace
}  // namespace gripsim
