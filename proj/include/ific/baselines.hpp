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

#pragma once

#include <memory>
#include <string>

#include "ific/controller.hpp"

namespace ific {

/// Shared force/impedance gains of every baseline.
struct UnifiedGains {
  GainSet gains;
  ForcePidParams pid;
};

struct LpfParams {
  double cutoff_hz = 20.0;
  double threshold = 5.0;   ///< [N]
  double ramp_time = 0.5;   ///< [s] linear re-engagement after the filtered force drops below
  void validate() const;
};

struct LpfState {
  Wrench filtered = Wrench::Zero();
  double gate_constrained = 1.0;
  double gate_unconstrained = 1.0;
};

/// One gate: drops to 0 while `triggered`, then climbs back at 1/ramp_time per second.
double update_gate(double gate, bool triggered, double ramp_time, double dt);

/// Force-frequency gating: a 20 Hz low-pass on F_ext decides whether contact is intended.
class LpfController final : public Controller {
 public:
  LpfController(UnifiedGains gains, LpfParams params);

  ControllerOutput step(const ControlContext& ctx) override;
  void reset() override;
  std::string name() const override { return "lpf"; }
  bool has_tanks() const override { return false; }
  std::unique_ptr<Controller> clone() const override;

  const LpfState& state() const { return state_; }
  const LpfParams& params() const { return params_; }

 private:
  UnifiedGains gains_;
  LpfParams params_;
  LpfState state_;
  FrameCache cache_;
  ForcePidState pid_;
  SetpointIntegrator setpoint_;
};

struct DsParams {
  double energy_threshold = 0.5;  ///< E_t [J]
  double energy_max = 2.0;        ///< E_m [J]
  double leak_time = 2.0;         ///< [s]
  double admittance_mass = 5.0;   ///< M_a [kg]
  double admittance_damping = 50.0;  ///< D_a [N·s/m]
  void validate() const;
};

struct DsState {
  double energy = 0.0;
  double ratio = 0.0;            ///< h
  Twist admittance_velocity = Twist::Zero();
  Vector6 setpoint = Vector6::Zero();
  Vector6 last_task_pose = Vector6::Zero();
  bool primed = false;
};

/// h = 0 at or below E_t, rising linearly to 1 at E_m.
double guidance_ratio(double energy, const DsParams& params);

/// Nominal-DS guidance: the stored unconstrained interaction energy blends task tracking
/// into admittance-driven guidance.
class DsController final : public Controller {
 public:
  DsController(UnifiedGains gains, DsParams params);

  ControllerOutput step(const ControlContext& ctx) override;
  void reset() override;
  std::string name() const override { return "ds"; }
  bool has_tanks() const override { return false; }
  std::unique_ptr<Controller> clone() const override;

  const DsState& state() const { return state_; }
  const DsParams& params() const { return params_; }

 private:
  UnifiedGains gains_;
  DsParams params_;
  DsState state_;
  FrameCache cache_;
  ForcePidState pid_;
};

}  // namespace ific
