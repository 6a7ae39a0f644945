// Copyright 2026 The IFIC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ific/config.hpp"
#include "ific/scenarios.hpp"

namespace ific {
namespace {

TEST(Reference, WipingPatternClosedForm) {
  const ReferenceParams p;
  const double w = 2.0 * std::numbers::pi * 0.2;
  for (double t : {0.0, 0.3, 1.25, 4.0, 7.7}) {
    const Reference r = wiping_reference(t, p);
    EXPECT_NEAR(r.pose[0], 0.1 * std::sin(w * t), 1e-15);
    EXPECT_NEAR(r.pose[1], 0.1 * std::cos(w * t), 1e-15);
    EXPECT_EQ(r.pose[2], 0.0);
    EXPECT_NEAR(r.velocity[1], -0.1 * w * std::sin(w * t), 1e-15);
    EXPECT_EQ(r.frame_wrench[2], -10.0);
    EXPECT_TRUE(r.force_pattern == BinaryPattern({0, 0, 1, 0, 0, 0}));
    EXPECT_TRUE(r.motion_pattern == BinaryPattern({1, 1, 0, 1, 1, 1}));
  }
}

TEST(Reference, VelocityAndAccelerationMatchFiniteDifferences) {
  const double h = 1e-5;
  for (double t : {0.1, 2.2, 3.9}) {
    const Reference a = wiping_reference(t - h);
    const Reference b = wiping_reference(t + h);
    const Reference c = wiping_reference(t);
    EXPECT_LE(((b.pose - a.pose) / (2 * h) - c.velocity).norm(), 1e-8);
    EXPECT_LE(((b.velocity - a.velocity) / (2 * h) - c.acceleration).norm(), 1e-7);
  }
}

TEST(Reference, UltrasoundScan) {
  const Reference r = ultrasound_reference(5.0);
  EXPECT_NEAR(r.pose[0], 0.05 * std::sin(2.0 * std::numbers::pi * 0.05 * 5.0), 1e-15);
  EXPECT_EQ(r.pose[1], 0.0);
  EXPECT_EQ(r.frame_wrench[2], -3.0);
}

TEST(Scenario, InitialStateRestsAtContactEquilibrium) {
  const ScenarioConfig cfg;
  const PlantState s = cfg.initial_state();
  EXPECT_NEAR(s.position.z(), -10.0 / 2e4, 1e-15);
  EXPECT_EQ(s.position.x(), 0.0);
  EXPECT_NEAR(s.position.y(), 0.1, 1e-15);
  const ContactWrench c = environment_contact(s, cfg.environment);
  EXPECT_NEAR(c.normal_force, 10.0, 1e-9);
}

TEST(Scenario, NameRoundTrips) {
  for (ControllerKind k :
       {ControllerKind::Ific, ControllerKind::Ufic, ControllerKind::Lpf, ControllerKind::Ds}) {
    EXPECT_EQ(controller_from_string(to_string(k)), k);
  }
  for (Task t : {Task::Wiping, Task::UltrasoundPhantom, Task::UltrasoundArm}) {
    EXPECT_EQ(task_from_string(to_string(t)), t);
  }
  EXPECT_THROW(controller_from_string("pid"), ConfigError);
}

TEST(Scenario, RunHasOneRecordPerStepAndIsDeterministic) {
  ScenarioConfig cfg;
  cfg.duration = 0.5;
  cfg.force_noise = 0.5;
  cfg.seed = 9;
  const Trace a = run_scenario(cfg);
  const Trace b = run_scenario(cfg);
  ASSERT_EQ(a.records.size(), 500u);
  EXPECT_EQ(a.records.front().t, 0.0);
  EXPECT_NEAR(a.records.back().t, 0.499, 1e-12);
  EXPECT_EQ(trace_hash(a.records), trace_hash(b.records));
  cfg.seed = 10;
  EXPECT_NE(trace_hash(run_scenario(cfg).records), trace_hash(a.records));
}

TEST(Scenario, SteadyWipingHoldsTheForce) {
  ScenarioConfig cfg;
  cfg.duration = 5.0;
  const Trace t = run_scenario(cfg);
  ASSERT_FALSE(t.aborted);
  for (std::size_t i = 1000; i < t.records.size(); ++i) {
    ASSERT_NEAR(t.records[i].contact_force, 10.0, 1.0);
  }
}

std::vector<TraceRecord> flat_records(int n) {
  std::vector<TraceRecord> out(n);
  for (int i = 0; i < n; ++i) out[i].t = i * 1e-3;
  return out;
}

TEST(Metrics, RmseMasks) {
  std::vector<TraceRecord> r = flat_records(4);
  r[0].f_ext[2] = 3.0;   // 3
  r[1].f_ext[0] = 4.0;   // 4
  r[2].f_ext[1] = 12.0;  // 12, masked by chamber
  r[2].d_fi = 2.0;
  r[3].f_ext[2] = 1.0;   // 1, masked by script
  r[3].f_human[0] = 1.0;
  EXPECT_NEAR(force_rmse(r, RmseMask::None), std::sqrt((9.0 + 16.0 + 144.0 + 1.0) / 4.0), 1e-15);
  EXPECT_NEAR(force_rmse(r, RmseMask::Chambers), std::sqrt((9.0 + 16.0 + 1.0) / 3.0), 1e-15);
  EXPECT_NEAR(force_rmse(r, RmseMask::Script), std::sqrt((9.0 + 16.0 + 144.0) / 3.0), 1e-15);
  for (TraceRecord& x : r) x.d_ii = 3.0;
  EXPECT_THROW(force_rmse(r, RmseMask::Chambers), ConfigError);
}

TEST(Metrics, RmseUsesTheAdjustedDesiredForce) {
  std::vector<TraceRecord> r = flat_records(2);
  for (TraceRecord& x : r) {
    x.f_d_prime << 5.0, 0.0, -10.0, 0.0, 0.0, 0.0;
    x.f_ext << -5.0, 0.0, 10.0, 0.0, 0.0, 0.0;
  }
  EXPECT_EQ(force_rmse(r, RmseMask::None), 0.0);
}

TEST(Metrics, InteractionEfficiency) {
  std::vector<TraceRecord> r = flat_records(101);
  for (int i = 0; i < 101; ++i) {
    r[i].pose[1] = 1e-3 * i;
    r[i].guidance = i < 50 ? 1.0 : 0.0;
    r[i].p_u = i % 2 == 0 ? 4.0 : -1.0;
  }
  const InteractionEfficiency e = interaction_efficiency(r, 1e-3, 10.0);
  EXPECT_NEAR(e.distance, 0.05, 1e-12);
  EXPECT_NEAR(e.work, 25 * 4.0 * 1e-3, 1e-12);
  EXPECT_NEAR(e.efficiency, 0.05 / 0.1, 1e-9);
  EXPECT_FALSE(e.budget_reached);

  const InteractionEfficiency capped = interaction_efficiency(r, 1e-3, 0.0195);
  EXPECT_TRUE(capped.budget_reached);
  EXPECT_NEAR(capped.work, 0.02, 1e-12);
  EXPECT_NEAR(capped.distance, 9e-3, 1e-12);

  for (TraceRecord& x : r) x.guidance = 0.0;
  EXPECT_THROW(interaction_efficiency(r, 1e-3, 10.0), ConfigError);
}

TEST(Metrics, RecoveryTime) {
  std::vector<TraceRecord> r = flat_records(3000);
  for (int i = 0; i < 3000; ++i) {
    r[i].twist[2] = 0.1;
    if (i >= 100 && i < 300) r[i].port_c[2] = 1.0;
    if (i >= 150 && i < 2300) r[i].d_fi = 5.0;
  }
  const std::optional<double> t = recovery_time(r, TankSide::Force);
  ASSERT_TRUE(t);
  EXPECT_NEAR(*t, 2.3 - 0.299, 1e-12);
  EXPECT_FALSE(recovery_time(r, TankSide::Impedance));
}

std::vector<TraceRecord> bounce() {
  // contact, lift-off at 1 s, recontact at 2 s with a 25 N spike at 2.1 s
  std::vector<TraceRecord> r = flat_records(4000);
  for (int i = 0; i < 4000; ++i) {
    TraceRecord& x = r[i];
    const bool airborne = i >= 1000 && i < 2000;
    x.penetration = airborne ? 0.0 : 1e-3;
    x.contact_force = airborne ? 0.0 : 10.0;
    if (airborne) x.twist[2] = i < 1500 ? 0.2 : -0.3;
  }
  r[2100].contact_force = 25.0;
  r[2400].contact_force = 40.0;
  return r;
}

TEST(Metrics, PeakContactForceWindow) {
  const std::vector<TraceRecord> r = bounce();
  EXPECT_EQ(peak_contact_force(r, 0.0, -1.0), 40.0);
  EXPECT_EQ(peak_contact_force(r, 0.0, 2.2), 25.0);
  EXPECT_EQ(peak_contact_force(r, 2.5, -1.0), 10.0);
}

TEST(Metrics, ContactLossAndRecontact) {
  const std::vector<TraceRecord> r = bounce();
  EXPECT_NEAR(*peak_velocity_after_contact_loss(r, 0.5), 0.3, 1e-15);
  EXPECT_EQ(*recontact_peak_force(r, 0.5, 0.25), 25.0);
  EXPECT_EQ(*recontact_peak_force(r, 0.5, 0.5), 40.0);
  EXPECT_FALSE(peak_velocity_after_contact_loss(r, 2.5));
  EXPECT_FALSE(recontact_peak_force(r, 2.5, 0.25));
}

TEST(Regression, WipingRmsePinned) {
  const RunConfig cfg = parse_config(std::string(IFIC_SCENARIO_DIR) + "/exp1_wiping.json");
  const Trace t = run_scenario(cfg.scenario);
  const MetricsReport m = compute_metrics(t, cfg.scenario.metrics);
  EXPECT_NEAR(m.rmse, 0.0145, 0.003);
}

}  // namespace
}  // namespace ific
