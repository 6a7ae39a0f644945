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

#include "ific/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ific {

Matrix6 GainSet::diagonal(double translational, double rotational) {
  Vector6 d;
  d << translational, translational, translational, rotational, rotational, rotational;
  return d.asDiagonal();
}

void GainSet::validate() const {
  const auto check = [](const Matrix6& m, const char* name) {
    if (!m.allFinite()) throw ConfigError(std::string("gain ") + name + " has non-finite entries");
    if ((m.diagonal().array() < 0.0).any()) {
      throw ConfigError(std::string("gain ") + name + " has negative diagonal entries");
    }
  };
  check(kp, "kp");
  check(ki, "ki");
  check(kd, "kd");
  check(stiffness, "stiffness");
  check(damping, "damping");
  if (!damping.isApprox(damping.transpose()) || !stiffness.isApprox(stiffness.transpose())) {
    throw ConfigError("stiffness and damping must be symmetric");
  }
}

WorldGains rotate_gains(const GainSet& gains, const Rotation& frame) {
  return {rotate_gain(gains.kp, frame), rotate_gain(gains.ki, frame),
          rotate_gain(gains.kd, frame)};
}

Wrench desired_force_world(const Reference& reference, const Wrench& external) {
  const Matrix6 r = reference.frame.block();
  const Vector6 external_frame = r.transpose() * external;
  const Vector6 mask = reference.force_pattern.as_vector() - Vector6::Ones();
  return r * (reference.frame_wrench + mask.cwiseProduct(external_frame));
}

ForcePidResult force_pid(const ForcePidState& pid, const Reference& reference,
                         const Wrench& external, const WorldGains& gains,
                         const ForcePidParams& params, double dt, double integration_scale) {
  if (!(dt > 0.0)) throw ConfigError("force_pid: dt must be > 0");
  ForcePidResult out;
  out.state = pid;
  out.desired = desired_force_world(reference, external);
  const Vector6 error = out.desired + external;

  ForcePidState& s = out.state;
  s.integral += std::clamp(integration_scale, 0.0, 1.0) * error * dt;
  for (int i = 0; i < 6; ++i) {
    const double k = std::abs(gains.ki(i, i));
    if (k > 0.0) {
      const double limit = params.windup_limit / k;
      s.integral(i) = std::clamp(s.integral(i), -limit, limit);
    }
  }

  if (!s.primed) {
    s.prev_error = error;
    s.filtered_rate.setZero();
    s.primed = true;
  }
  const double tau = 1.0 / (2.0 * std::numbers::pi * params.rate_cutoff_hz);
  const double alpha = dt / (dt + tau);
  const Vector6 raw_rate = (error - s.prev_error) / dt;
  s.filtered_rate += alpha * (raw_rate - s.filtered_rate);
  s.prev_error = error;

  out.integral_derivative =
      gains.ki * s.integral + gains.kd * s.filtered_rate + reference.world_wrench();
  out.output = gains.kp * error + out.integral_derivative;
  return out;
}

ForcePorts split_force_ports(const ForcePidResult& pid, const Wrench& external,
                             const DirectionalBasis& force_basis, const WorldGains& gains) {
  ForcePorts p;
  p.interaction_constrained = gains.kp * (force_basis.span * external);
  p.regulation = gains.kp * (force_basis.span * pid.desired) + pid.integral_derivative;
  p.interaction_unconstrained = gains.kp * (force_basis.kernel * external);
  p.desired_unconstrained = gains.kp * (force_basis.kernel * pid.desired);

  const double scale = 1.0 + pid.output.norm() + external.norm();
  const double residual = (p.sum() - pid.output).cwiseAbs().maxCoeff();
  if (residual > 1e-6 * scale) {
    throw ConsistencyError("force sub-ports do not sum to the force output (residual " +
                           std::to_string(residual) + ")");
  }
  const double cancel =
      (force_basis.kernel * (pid.desired + external)).cwiseAbs().maxCoeff();
  if (cancel > 1e-6 * scale) {
    throw ConsistencyError("unconstrained force error does not cancel (residual " +
                           std::to_string(cancel) + "); gain frame and pattern disagree");
  }
  return p;
}

Wrench impedance_wrench(const PlantState& state, const Vector6& setpoint,
                        const Twist& setpoint_velocity, const Vector6& feedforward_acceleration,
                        bool lambda_c, const DirectionalBasis& motion_basis, const GainSet& gains,
                        const PlantModel& model) {
  const Twist& v = state.twist;
  Wrench f = model.inertia * feedforward_acceleration;
  if (lambda_c) f -= gains.damping * (motion_basis.kernel * v);
  f -= gains.damping * (motion_basis.span * (v - setpoint_velocity));
  f -= gains.stiffness * (state.pose() - setpoint);
  f += model.coriolis * setpoint_velocity + model.gravity;
  return f;
}

void FrameCache::update(const Reference& reference, const GainSet& gains) {
  const bool same = valid_ && reference.frame == frame_ &&
                    reference.force_pattern == force_pattern_ &&
                    reference.motion_pattern == motion_pattern_ && gains.kp == kp_frame_ &&
                    gains.ki == ki_frame_ && gains.kd == kd_frame_;
  if (same) return;
  frame_ = reference.frame;
  force_pattern_ = reference.force_pattern;
  motion_pattern_ = reference.motion_pattern;
  kp_frame_ = gains.kp;
  ki_frame_ = gains.ki;
  kd_frame_ = gains.kd;
  force_basis_ = build_directional_basis(frame_, force_pattern_);
  motion_basis_ = build_directional_basis(frame_, motion_pattern_);
  world_gains_ = rotate_gains(gains, frame_);
  valid_ = true;
}

SetpointIntegrator::Result SetpointIntegrator::advance(const Reference& reference,
                                                       const PlantState& state,
                                                       double velocity_scale, double relax_rate,
                                                       const DirectionalBasis& motion_basis,
                                                       const Matrix6& stiffness, double dt) {
  const double s = velocity_scale;
  Result r;
  r.relaxation_power = 0.0;
  if (!primed_) {
    setpoint_ = reference.pose;
    last_reference_pose_ = reference.pose;
    last_scale_ = s;
    primed_ = true;
  } else {
    setpoint_ += last_scale_ * (reference.pose - last_reference_pose_);
    last_reference_pose_ = reference.pose;
    const double gain = std::clamp(relax_rate * (1.0 - s) * dt, 0.0, 1.0);
    if (gain > 0.0) {
      const Vector6 before = state.pose() - setpoint_;
      setpoint_ += gain * (motion_basis.span * before);
      const Vector6 after = state.pose() - setpoint_;
      r.relaxation_power = 0.5 *
                           (before.dot(stiffness * before) - after.dot(stiffness * after)) / dt;
    }
  }
  r.pose = setpoint_;
  r.velocity = last_scale_ * reference.velocity;
  r.feedforward = s * reference.acceleration + reference.velocity * ((s - last_scale_) / dt);
  last_scale_ = s;
  return r;
}

TankParams IficParams::default_impedance_tank() {
  TankParams p;
  p.valve_drain_rate = 0.01;
  return p;
}

void IficParams::validate() const {
  gains.validate();
  force_tank.validate();
  impedance_tank.validate();
  if (!(pid.windup_limit > 0.0)) throw ConfigError("pid windup_limit must be > 0");
  if (!(pid.rate_cutoff_hz > 0.0)) throw ConfigError("pid rate_cutoff_hz must be > 0");
  if (!(setpoint_relax_rate >= 0.0)) throw ConfigError("setpoint_relax_rate must be >= 0");
}

IficParams ufic_params(IficParams base, double budget) {
  for (TankParams* t : {&base.force_tank, &base.impedance_tank}) {
    t->interactive_enabled = false;
    t->interactive_budget = 0.0;
    t->total_budget = budget;
  }
  return base;
}

IficController::IficController(IficParams params, std::string name)
    : params_(std::move(params)), name_(std::move(name)) {
  params_.validate();
  reset();
}

void IficController::reset() {
  pid_ = ForcePidState{};
  setpoint_.reset();
  force_tank_ = TankState::full(params_.force_tank);
  impedance_tank_ = TankState::full(params_.impedance_tank);
  last_force_attenuation_ = 1.0;
}

void IficController::set_tanks(const TankState& force, const TankState& impedance) {
  force_tank_ = force;
  impedance_tank_ = impedance;
}

std::unique_ptr<Controller> IficController::clone() const {
  return std::make_unique<IficController>(*this);
}

bool IficController::set_parameter(const std::string& key, double value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos) return false;
  const std::string group = key.substr(0, dot);
  const std::string field = key.substr(dot + 1);
  TankParams* tank = group == "force_tank"       ? &params_.force_tank
                     : group == "impedance_tank" ? &params_.impedance_tank
                                                 : nullptr;
  if (tank == nullptr) return false;
  TankParams updated = *tank;
  if (field == "valve_drain_rate") {
    updated.valve_drain_rate = value;
  } else if (field == "load_time") {
    updated.load_time = value;
  } else if (field == "total_budget") {
    updated.total_budget = value;
  } else if (field == "interactive_budget") {
    if (!updated.interactive_enabled) return false;
    updated.interactive_budget = value;
  } else {
    return false;
  }
  updated.validate();
  *tank = updated;
  TankState& state = tank == &params_.force_tank ? force_tank_ : impedance_tank_;
  state.total_energy = std::min(state.total_energy, tank->total_budget);
  state.interactive_energy =
      std::min({state.interactive_energy, tank->interactive_budget, state.total_energy});
  return true;
}

ControllerOutput IficController::step(const ControlContext& ctx) {
  const Reference& ref = ctx.reference;
  const Twist& v = ctx.state.twist;
  const double dt = ctx.dt;
  cache_.update(ref, params_.gains);
  const DirectionalBasis& force_basis = cache_.force_basis();
  const DirectionalBasis& motion_basis = cache_.motion_basis();
  const GainSet& gains = params_.gains;

  ControllerOutput out;
  out.desired_force = ref.world_wrench();
  out.reference_pose = ref.pose;
  out.reference_velocity = ref.velocity;
  out.stiffness = gains.stiffness;
  out.force_total_energy = force_tank_.total_energy;
  out.force_interactive_energy = force_tank_.interactive_energy;
  out.impedance_total_energy = impedance_tank_.total_energy;
  out.impedance_interactive_energy = impedance_tank_.interactive_energy;

  const ForcePidResult pid = force_pid(pid_, ref, ctx.external, cache_.gains(), params_.pid, dt,
                                       params_.pin_tanks ? 1.0 : last_force_attenuation_);
  pid_ = pid.state;
  out.raw_force = pid.output;
  out.desired_force_prime = pid.desired;
  out.ports = split_force_ports(pid, ctx.external, force_basis, cache_.gains());

  const InteractionPowers powers = interaction_powers(v, ctx.external, force_basis);
  out.power_constrained = powers.constrained;
  out.power_unconstrained = powers.unconstrained;
  out.constrained_damping_power = v.dot(gains.damping * (motion_basis.kernel * v));
  const double kp_pc = v.dot(out.ports.interaction_constrained);
  const double kp_pu = v.dot(out.ports.interaction_unconstrained);

  double force_scale = 1.0;
  if (params_.pin_tanks) {
    out.lambda_c = true;
    out.force = out.raw_force;
  } else {
    const ForceTankStep fs = force_tank_step(
        force_tank_, params_.force_tank,
        {v.dot(out.ports.regulation), out.constrained_damping_power, kp_pc}, dt);
    out.lambda_c = fs.result.lambda || !params_.force_tank.interactive_enabled;
    out.d_force_total = fs.result.d_total;
    out.d_force_interactive = fs.result.d_interactive;
    out.force_tank_power = fs.control_power;
    out.tank_discarded += fs.result.discarded;
    force_tank_ = fs.result.next;
    force_scale = 1.0 / (out.d_force_total * out.d_force_interactive);
    out.force = out.raw_force * force_scale;
  }
  last_force_attenuation_ = force_scale;

  double velocity_scale = 1.0;
  if (!params_.pin_tanks) {
    const DampingFactors di = current_damping(impedance_tank_, params_.impedance_tank, kp_pu);
    out.d_impedance_total = di.total;
    out.d_impedance_interactive = di.interactive;
    velocity_scale = 1.0 / di.product();
  }

  const SetpointIntegrator::Result sp =
      setpoint_.advance(ref, ctx.state, velocity_scale, params_.setpoint_relax_rate,
                        motion_basis, gains.stiffness, dt);
  out.setpoint = sp.pose;
  out.setpoint_velocity = sp.velocity;
  out.relaxation_power = sp.relaxation_power;

  const Twist tracking_error = v - sp.velocity;
  out.motion_damping_power =
      tracking_error.dot(gains.damping * (motion_basis.span * tracking_error));
  out.impedance = impedance_wrench(ctx.state, sp.pose, sp.velocity, sp.feedforward,
                                   out.lambda_c, motion_basis, gains, ctx.model);

  if (!params_.pin_tanks) {
    const ImpedanceTankStep is = impedance_tank_step(
        impedance_tank_, params_.impedance_tank,
        {ref.velocity.dot(out.force + ctx.external), out.motion_damping_power, kp_pu}, dt);
    out.impedance_tank_power = is.control_power;
    out.tank_discarded += is.result.discarded;
    impedance_tank_ = is.result.next;
  }
  return out;
}

}  // namespace ific
