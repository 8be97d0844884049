#include <gtest/gtest.h>

#include <cmath>

#include "gripsim/errors.hpp"
#include "gripsim/pneumatics.hpp"
#include "oracle.hpp"

namespace gripsim {
namespace {

const RingModel kRing;

RingState locked_at(double p0) { return lock(RingState::regulated(p0), kRing); }

TEST(Pneumatics, VolumeLaw) {
  EXPECT_EQ(volume_at_angle(kRing, 0.0), 5000.0);
  EXPECT_NEAR(volume_at_angle(kRing, deg_to_rad(30.0)), 5000.0 * (1 - 0.15 * std::numbers::pi / 6), 1e-9);
  EXPECT_NEAR(volume_at_angle(kRing, deg_to_rad(30.0)), 4607.3, 0.05);
  RingModel rigid;
  rigid.kappa_per_rad = 0.0;
  EXPECT_EQ(volume_at_angle(rigid, 1.2), 5000.0);
}

TEST(Pneumatics, VolumeStrictlyDecreasing) {
  double prev = volume_at_angle(kRing, 0.0);
  for (double a = 1e-6; a < deg_to_rad(80.0); a += 1e-3) {
    const double v = volume_at_angle(kRing, a);
    ASSERT_LT(v, prev);
    prev = v;
  }
}

TEST(Pneumatics, LockRecordsGasConstant) {
  EXPECT_NEAR(locked_at(0.0).nv_const, kRing.p_atm_kpa * 5000.0, 1e-9);
  EXPECT_NEAR(locked_at(60.0).nv_const, 161.325 * 5000.0, 1e-9);
  EXPECT_THROW(lock(locked_at(10.0), kRing), StateError);
}

TEST(Pneumatics, PressureAtLockAngleUnchanged) {
  const RingState s = locked_at(60.0);
  EXPECT_NEAR(pressure_at_angle(s, kRing, 0.0), 60.0, 1e-12);
  EXPECT_THROW(pressure_at_angle(RingState::regulated(60.0), kRing, 0.1), StateError);
}

TEST(Pneumatics, RigidCavityHoldsPressure) {
  RingModel rigid;
  rigid.kappa_per_rad = 0.0;
  const RingState s = lock(RingState::regulated(40.0), rigid);
  for (double deg : {0.0, 20.0, 80.0}) EXPECT_NEAR(pressure_at_angle(s, rigid, deg_to_rad(deg)), 40.0, 1e-12);
}

TEST(Pneumatics, PressureRiseMatchesMassBalanceIntegration) {
  const RingState s = locked_at(60.0);
  const double dp = pressure_at_angle(s, kRing, deg_to_rad(20.0)) - 60.0;
  EXPECT_NEAR(dp, oracle::mass_balance_dp(kRing, 60.0, 20.0), 1e-8);
  for (double p0 : {0.0, 20.0, 80.0}) {
    for (double deg : {5.0, 45.0, 80.0}) {
      const double got = pressure_at_angle(locked_at(p0), kRing, deg_to_rad(deg)) - p0;
      EXPECT_NEAR(got, oracle::mass_balance_dp(kRing, p0, deg), 1e-7 * std::max(1.0, got));
    }
  }
}

TEST(Pneumatics, ConservationAlongTrajectory) {
  RingState s = locked_at(35.0);
  const double nv = s.nv_const;
  for (double deg : {10.0, 70.0, 3.0, 55.5, 0.0, 80.0}) {
    s = bend_to(s, kRing, deg_to_rad(deg));
    const double pv = (s.p_gauge_kpa + kRing.p_atm_kpa) * volume_at_angle(kRing, s.alpha_rad);
    EXPECT_NEAR(pv / nv, 1.0, 1e-9);
  }
}

TEST(Pneumatics, PressureChangeStrictlyIncreasing) {
  const RingState s = locked_at(20.0);
  double prev = pressure_at_angle(s, kRing, 0.0);
  for (int i = 1; i <= 800; ++i) {
    const double p = pressure_at_angle(s, kRing, deg_to_rad(0.1 * i));
    ASSERT_GT(p, prev);
    prev = p;
  }
}

TEST(Pneumatics, TorqueDeadZoneAndGrowth) {
  for (double deg : {0.0, 10.0, 20.0}) EXPECT_EQ(joint_torque(kRing, deg_to_rad(deg), 150.0), 0.0);
  EXPECT_NEAR(joint_torque(kRing, deg_to_rad(80.0), 150.0), 450.0, 0.5);
  RingModel no_base = kRing;
  no_base.c1_nmm_per_rad = 0.0;
  for (double deg : {0.0, 40.0, 80.0}) EXPECT_EQ(joint_torque(no_base, deg_to_rad(deg), 0.0), 0.0);
  for (double p : {0.0, 50.0, 150.0}) {
    double prev = 0.0;
    for (int i = 0; i <= 80; ++i) {
      const double t = joint_torque(kRing, deg_to_rad(i), p);
      ASSERT_GE(t, prev);
      prev = t;
    }
  }
  for (int i = 0; i <= 80; ++i) {
    EXPECT_LE(joint_torque(kRing, deg_to_rad(i), 10.0), joint_torque(kRing, deg_to_rad(i), 11.0));
  }
}

TEST(Pneumatics, LeakStep) {
  const RingState s = bend_to(locked_at(60.0), kRing, deg_to_rad(30.0));
  const RingState same = leak_step(s, kRing, 5.0);
  EXPECT_EQ(same.nv_const, s.nv_const);
  EXPECT_EQ(same.p_gauge_kpa, s.p_gauge_kpa);

  RingModel leaky = kRing;
  leaky.leak_rate_per_s = 0.001;
  EXPECT_EQ(leak_step(s, leaky, 0.0).nv_const, s.nv_const);
  const RingState after = leak_step(s, leaky, 10.0);
  EXPECT_NEAR(after.nv_const / s.nv_const, 0.99, 1e-12);
  EXPECT_LT(after.p_gauge_kpa, s.p_gauge_kpa);
  EXPECT_NEAR((after.p_gauge_kpa + kRing.p_atm_kpa) * volume_at_angle(kRing, s.alpha_rad), after.nv_const,
              1e-6);

  leaky.leak_rate_per_s = 0.5;
  RingState drained = s;
  for (int i = 0; i < 100; ++i) drained = leak_step(drained, leaky, 1.0);
  EXPECT_GE(drained.p_gauge_kpa, 0.0);
  EXPECT_NEAR(drained.p_gauge_kpa, 0.0, 1e-9);
}

TEST(Pneumatics, Quantize) {
  EXPECT_EQ(quantize(1.26, 0.5), 1.5);
  EXPECT_EQ(quantize(1.25, 0.5), 1.5);
  EXPECT_EQ(quantize(1.24, 0.5), 1.0);
  EXPECT_EQ(quantize(-0.25, 0.5), 0.0);
  EXPECT_EQ(quantize(1.2345, 0.0), 1.2345);
}

TEST(Pneumatics, SensorExactWhenIdeal) {
  SensorModel ideal;
  ideal.noise_frac = 0.0;
  ideal.quant_step_kpa = 0.0;
  PressureSensor sensor(ideal);
  EXPECT_EQ(sensor.read(12.3456789), 12.3456789);
  EXPECT_EQ(sensor.settle_read(7.25, 8), 7.25);
}

TEST(Pneumatics, SensorQuantisesNoiseFreeReading) {
  SensorModel m;
  m.noise_frac = 0.0;
  m.quant_step_kpa = 0.5;
  PressureSensor sensor(m);
  EXPECT_EQ(sensor.read(1.26), 1.5);
}

TEST(Pneumatics, SensorDeterministicPerSeed) {
  SensorModel m;
  m.seed = 42;
  PressureSensor a(m), b(m);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.read(50.0), b.read(50.0));
  m.seed = 43;
  PressureSensor c(m);
  PressureSensor d(SensorModel{.seed = 42});
  int differ = 0;
  for (int i = 0; i < 20; ++i) differ += c.read(50.0) != d.read(50.0);
  EXPECT_GT(differ, 0);
}

TEST(Pneumatics, SensorNoiseStatistics) {
  SensorModel m;
  m.quant_step_kpa = 0.0;
  m.seed = 9;
  PressureSensor s(m);
  const int n = 20000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = s.read(100.0) - 100.0;
    sum += e;
    sq += e * e;
  }
  const double sigma = std::sqrt(sq / n);
  EXPECT_NEAR(sum / n, 0.0, 4 * m.sigma_kpa() / std::sqrt(n));
  EXPECT_NEAR(sigma / m.sigma_kpa(), 1.0, 0.03);
  EXPECT_NEAR(m.sigma_kpa(), 700.0 * 0.025 / 3.0, 1e-12);
}

TEST(Pneumatics, ModelValidation) {
  RingModel r;
  r.kappa_per_rad = 1.0;  // volume would collapse before 80 deg
  EXPECT_THROW(r.validate(deg_to_rad(80.0)), DomainError);
  r = RingModel{};
  r.alpha_slack_rad = deg_to_rad(31.0);
  EXPECT_THROW(r.validate(deg_to_rad(80.0)), DomainError);
  r = RingModel{};
  r.leak_rate_per_s = -1.0;
  EXPECT_THROW(r.validate(deg_to_rad(80.0)), DomainError);
  EXPECT_NO_THROW(RingModel{}.validate(deg_to_rad(80.0)));
  SensorModel s;
  s.noise_frac = -0.1;
  EXPECT_THROW(s.validate(), DomainError);
  EXPECT_THROW(RingState::regulated(-1.0), DomainError);
}

}  // namespace
}  // namespace gripsim
