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

#include "ific/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ific {

void LpfParams::validate() const {
  if (!(cutoff_hz > 0.0)) throw ConfigError("lpf cutoff_hz must be > 0");
  if (!(threshold > 0.0)) throw ConfigError("lpf threshold must be > 0");
  if (!(ramp_time > 0.0)) throw ConfigError("lpf ramp_time must be > 0");
}

double update_gate(double gate, bool triggered, double ramp_time, double dt) {
  if (triggered) return 0.0;
  return std::min(1.0, gate + dt / ramp_time);
}

LpfController::LpfController(UnifiedGains gains, LpfParams params)
    : gains_(std::move(gains)), params_(params) {
  gains_.gains.validate();
  params_.validate();
}

void LpfController::reset() {
  state_ = LpfState{};
  pid_ = ForcePidState{};
  setpoint_.reset();
}

std::unique_ptr<Controller> LpfController::clone() const {
  return std::make_unique<LpfController>(*this);
}

ControllerOutput LpfController::step(const ControlContext& ctx) {
  const Reference& ref = ctx.reference;
  const double dt = ctx.dt;
  cache_.update(ref, gains_.gains);
  const DirectionalBasis& force_basis = cache_.force_basis();
  const DirectionalBasis& motion_basis = cache_.motion_basis();

  const double tau = 1.0 / (2.0 * std::numbers::pi * params_.cutoff_hz);
  state_.filtered += (dt / (dt + tau)) * (ctx.external - state_.filtered);

  const Wrench desired = ref.world_wrench();
  bool constrained_trigger = false;
  if (desired.norm() > 0.0) {
    const Vector6 away = -desired / desired.norm();
    constrained_trigger =
        away.dot(force_basis.span * (state_.filtered + desired)) > params_.threshold;
  } else {
    constrained_trigger = (force_basis.span * state_.filtered).norm() > params_.threshold;
  }
  const bool unconstrained_trigger =
      (force_basis.kernel * state_.filtered).norm() > params_.threshold;
  state_.gate_constrained =
      update_gate(state_.gate_constrained, constrained_trigger, params_.ramp_time, dt);
  state_.gate_unconstrained =
      update_gate(state_.gate_unconstrained, unconstrained_trigger, params_.ramp_time, dt);

  ControllerOutput out;
  out.desired_force = desired;
  out.reference_pose = ref.pose;
  out.reference_velocity = ref.velocity;
  out.stiffness = gains_.gains.stiffness;
  out.gate_constrained = state_.gate_constrained;
  out.gate_unconstrained = state_.gate_unconstrained;

  const ForcePidResult pid = force_pid(pid_, ref, ctx.external, cache_.gains(), gains_.pid, dt,
                                       state_.gate_constrained);
  pid_ = pid.state;
  out.raw_force = pid.output;
  out.desired_force_prime = pid.desired;
  out.ports = split_force_ports(pid, ctx.external, force_basis, cache_.gains());
  out.force = state_.gate_constrained * pid.output;

  const InteractionPowers powers = interaction_powers(ctx.state.twist, ctx.external, force_basis);
  out.power_constrained = powers.constrained;
  out.power_unconstrained = powers.unconstrained;

  const SetpointIntegrator::Result sp =
      setpoint_.advance(ref, ctx.state, 1.0, 0.0, motion_basis, gains_.gains.stiffness, dt);
  out.setpoint = sp.pose;
  out.setpoint_velocity = sp.velocity;
  const Twist& v = ctx.state.twist;
  const Twist tracking_error = v - sp.velocity;
  out.constrained_damping_power = v.dot(gains_.gains.damping * (motion_basis.kernel * v));
  out.motion_damping_power =
      tracking_error.dot(gains_.gains.damping * (motion_basis.span * tracking_error));
  out.lambda_c = true;
  out.impedance = state_.gate_unconstrained *
                  impedance_wrench(ctx.state, sp.pose, sp.velocity, sp.feedforward, true,
                                   motion_basis, gains_.gains, ctx.model);
  return out;
}

void DsParams::validate() const {
  if (!(energy_threshold >= 0.0)) throw ConfigError("ds energy_threshold must be >= 0");
  if (!(energy_max > energy_threshold)) {
    throw ConfigError("ds energy_max must exceed energy_threshold");
  }
  if (!(leak_time > 0.0)) throw ConfigError("ds leak_time must be > 0");
  if (!(admittance_mass > 0.0)) throw ConfigError("ds admittance_mass must be > 0");
  if (!(admittance_damping >= 0.0)) throw ConfigError("ds admittance_damping must be >= 0");
}

double guidance_ratio(double energy, const DsParams& params) {
  if (energy <= params.energy_threshold) return 0.0;
  return std::min(1.0, (energy - params.energy_threshold) /
                           (params.energy_max - params.energy_threshold));
}

DsController::DsController(UnifiedGains gains, DsParams params)
    : gains_(std::move(gains)), params_(params) {
  gains_.gains.validate();
  params_.validate();
}

void DsController::reset() {
  state_ = DsState{};
  pid_ = ForcePidState{};
}

std::unique_ptr<Controller> DsController::clone() const {
  return std::make_unique<DsController>(*this);
}

ControllerOutput DsController::step(const ControlContext& ctx) {
  const Reference& task = ctx.reference;
  const double dt = ctx.dt;
  const Twist& v = ctx.state.twist;
  cache_.update(task, gains_.gains);
  const DirectionalBasis& force_basis = cache_.force_basis();
  const DirectionalBasis& motion_basis = cache_.motion_basis();

  const InteractionPowers powers = interaction_powers(v, ctx.external, force_basis);
  state_.energy += (std::max(powers.unconstrained, 0.0) - state_.energy / params_.leak_time) * dt;
  state_.energy = std::max(state_.energy, 0.0);
  state_.ratio = guidance_ratio(state_.energy, params_);
  const double h = state_.ratio;

  const Vector6 admittance_acceleration =
      (motion_basis.span * ctx.external - params_.admittance_damping * state_.admittance_velocity) /
      params_.admittance_mass;
  state_.admittance_velocity += admittance_acceleration * dt;

  if (!state_.primed) {
    state_.setpoint = task.pose;
    state_.primed = true;
  } else {
    state_.setpoint += (1.0 - h) * (task.pose - state_.last_task_pose) +
                       state_.admittance_velocity * dt;
  }
  state_.last_task_pose = task.pose;

  Reference blended = task;
  blended.pose = state_.setpoint;
  blended.velocity = (1.0 - h) * task.velocity + state_.admittance_velocity;
  blended.acceleration = (1.0 - h) * task.acceleration + admittance_acceleration;
  blended.frame_wrench = (1.0 - h) * task.frame_wrench;

  ControllerOutput out;
  out.desired_force = blended.world_wrench();
  out.reference_pose = task.pose;
  out.reference_velocity = task.velocity;
  out.stiffness = gains_.gains.stiffness;
  out.guidance_ratio = h;
  out.interaction_energy = state_.energy;
  out.power_constrained = powers.constrained;
  out.power_unconstrained = powers.unconstrained;

  const ForcePidResult pid =
      force_pid(pid_, blended, ctx.external, cache_.gains(), gains_.pid, dt, 1.0);
  pid_ = pid.state;
  out.raw_force = pid.output;
  out.force = pid.output;
  out.desired_force_prime = pid.desired;
  out.ports = split_force_ports(pid, ctx.external, force_basis, cache_.gains());

  out.setpoint = blended.pose;
  out.setpoint_velocity = blended.velocity;
  const Twist tracking_error = v - blended.velocity;
  out.constrained_damping_power = v.dot(gains_.gains.damping * (motion_basis.kernel * v));
  out.motion_damping_power =
      tracking_error.dot(gains_.gains.damping * (motion_basis.span * tracking_error));
  out.lambda_c = true;
  out.impedance = impedance_wrench(ctx.state, blended.pose, blended.velocity,
                                   blended.acceleration, true, motion_basis, gains_.gains,
                                   ctx.model);
  return out;
}

}  // namespace ific
