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

#include "ific/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ific/passivity.hpp"

namespace ific {

std::string to_string(Task task) {
  switch (task) {
    case Task::Wiping: return "wiping";
    case Task::UltrasoundPhantom: return "ultrasound-phantom";
    case Task::UltrasoundArm: return "ultrasound-arm";
  }
  return "wiping";
}

std::string to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Ific: return "ific";
    case ControllerKind::Ufic: return "ufic";
    case ControllerKind::Lpf: return "lpf";
    case ControllerKind::Ds: return "ds";
  }
  return "ific";
}

Task task_from_string(const std::string& name) {
  for (Task t : {Task::Wiping, Task::UltrasoundPhantom, Task::UltrasoundArm}) {
    if (to_string(t) == name) return t;
  }
  throw ConfigError("unknown task '" + name + "'");
}

ControllerKind controller_from_string(const std::string& name) {
  for (ControllerKind k :
       {ControllerKind::Ific, ControllerKind::Ufic, ControllerKind::Lpf, ControllerKind::Ds}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown controller '" + name + "' (expected ific, ufic, lpf or ds)");
}

Reference task_reference(const ReferenceParams& p, double t) {
  const double w = 2.0 * std::numbers::pi * p.frequency;
  const double sx = std::sin(w * t);
  const double cx = std::cos(w * t);
  const double sy = std::sin(w * t + p.phase_y);
  const double cy = std::cos(w * t + p.phase_y);
  Reference r;
  r.pose << p.center.x() + p.amplitude_x * sx, p.center.y() + p.amplitude_y * sy,
      p.surface_height, 0.0, 0.0, 0.0;
  r.velocity << p.amplitude_x * w * cx, p.amplitude_y * w * cy, 0.0, 0.0, 0.0, 0.0;
  r.acceleration << -p.amplitude_x * w * w * sx, -p.amplitude_y * w * w * sy, 0.0, 0.0, 0.0,
      0.0;
  r.frame_wrench << 0.0, 0.0, p.force_z, 0.0, 0.0, 0.0;
  r.force_pattern = BinaryPattern::nonzeros_of(r.frame_wrench);
  r.motion_pattern = r.force_pattern.complement();
  return r;
}

Reference wiping_reference(double t, const ReferenceParams& params) {
  return task_reference(params, t);
}

ReferenceParams ultrasound_params() {
  ReferenceParams p;
  p.amplitude_x = 0.05;
  p.amplitude_y = 0.0;
  p.frequency = 0.05;
  p.force_z = -3.0;
  return p;
}

Reference ultrasound_reference(double t, const ReferenceParams& params) {
  return task_reference(params, t);
}

void ScenarioConfig::validate() const {
  if (!(duration >= 0.0)) throw ConfigError("duration must be >= 0");
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(reference.frequency >= 0.0)) throw ConfigError("reference frequency must be >= 0");
  if (std::abs(reference.surface_height - environment.surface_height) > 1e-12) {
    throw ConfigError("reference surface_height must match the environment surface height");
  }
  environment.validate();
  human.validate();
  ific.validate();
  lpf.validate();
  ds.validate();
  if (!(ufic_budget > 0.0)) throw ConfigError("ufic budget must be > 0");
  if (!(force_noise >= 0.0)) throw ConfigError("force_noise must be >= 0");
  if (!(metrics.work_budget > 0.0)) throw ConfigError("metrics work_budget must be > 0");
}

PlantState ScenarioConfig::initial_state() const {
  const Reference r = task_reference(reference, 0.0);
  PlantState s;
  s.position = r.pose.head<3>();
  if (reference.force_z < 0.0 && environment.stiffness > 0.0) {
    s.position.z() = environment.surface_height + reference.force_z / environment.stiffness;
  }
  s.twist = r.velocity;
  return s;
}

std::unique_ptr<Controller> make_controller(const ScenarioConfig& cfg, ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Ific: return std::make_unique<IficController>(cfg.ific, "ific");
    case ControllerKind::Ufic:
      return std::make_unique<IficController>(ufic_params(cfg.ific, cfg.ufic_budget), "ufic");
    case ControllerKind::Lpf:
      return std::make_unique<LpfController>(UnifiedGains{cfg.ific.gains, cfg.ific.pid},
                                             cfg.lpf);
    case ControllerKind::Ds:
      return std::make_unique<DsController>(UnifiedGains{cfg.ific.gains, cfg.ific.pid}, cfg.ds);
  }
  throw ConfigError("unknown controller kind");
}

Simulation::Simulation(ScenarioConfig cfg) : cfg_(std::move(cfg)), human_(cfg_.human) {
  cfg_.validate();
  controller_ = make_controller(cfg_, cfg_.controller);
  total_steps_ = static_cast<std::size_t>(std::llround(cfg_.duration / cfg_.dt));
  reset();
}

void Simulation::reset() {
  controller_->reset();
  human_.reset();
  state_ = cfg_.initial_state();
  last_ = TraceRecord{};
  live_wrench_.setZero();
  rng_.seed(cfg_.seed);
  noise_.reset();
  step_ = 0;
}

void Simulation::select_controller(ControllerKind kind) {
  cfg_.controller = kind;
  controller_ = make_controller(cfg_, kind);
}

bool Simulation::set_parameter(const std::string& key, double value) {
  return controller_->set_parameter(key, value);
}

const TraceRecord& Simulation::step() {
  const double dt = cfg_.dt;
  const double t = static_cast<double>(step_) * dt;
  state_.time = t;

  const Reference ref = task_reference(cfg_.reference, t);
  const Wrench human = human_.wrench(state_, t) + live_wrench_;
  const ContactWrench contact =
      environment_contact(state_, cfg_.environment, cfg_.human.surface_offset(t));
  const Wrench external = human + contact.wrench;
  Wrench measured = external;
  if (cfg_.force_noise > 0.0) {
    for (int i = 0; i < 6; ++i) measured(i) += cfg_.force_noise * noise_(rng_);
  }

  const ControlContext ctx{state_, cfg_.plant, ref, measured, dt};
  const ControllerOutput out = controller_->step(ctx);

  TraceRecord& r = last_;
  r.t = t;
  r.pose = state_.pose();
  r.twist = state_.twist;
  r.setpoint = out.setpoint;
  r.setpoint_velocity = out.setpoint_velocity;
  r.xd = out.reference_pose;
  r.xd_dot = out.reference_velocity;
  r.f_ext = external;
  r.f_human = human;
  r.f_d = out.desired_force;
  r.f_d_prime = out.desired_force_prime;
  r.f_f = out.raw_force;
  r.f_f_prime = out.force;
  r.f_imp = out.impedance;
  r.port_c = out.ports.interaction_constrained;
  r.port_r = out.ports.regulation;
  r.port_u = out.ports.interaction_unconstrained;
  r.port_du = out.ports.desired_unconstrained;
  r.p_c = out.power_constrained;
  r.p_u = out.power_unconstrained;
  r.tank_power_f = out.force_tank_power;
  r.tank_power_i = out.impedance_tank_power;
  r.e_ft = out.force_total_energy;
  r.e_fi = out.force_interactive_energy;
  r.e_it = out.impedance_total_energy;
  r.e_ii = out.impedance_interactive_energy;
  r.d_ft = out.d_force_total;
  r.d_fi = out.d_force_interactive;
  r.d_it = out.d_impedance_total;
  r.d_ii = out.d_impedance_interactive;
  r.lambda_c = out.lambda_c ? 1.0 : 0.0;
  const StorageBreakdown v =
      storage_value(state_, out.setpoint, out.setpoint_velocity, out.force_total_energy,
                    out.impedance_total_energy, out.stiffness, cfg_.plant);
  r.v_kinetic = v.kinetic;
  r.v_elastic = v.elastic;
  r.v_tank_f = v.tank_force;
  r.v_tank_i = v.tank_impedance;
  r.v_total = v.total;
  r.balance_residual = port_power_balance(r).residual;
  r.contact_force = contact.normal_force;
  r.penetration = contact.penetration;
  const bool scripted_wrench = std::any_of(
      cfg_.human.segments.begin(), cfg_.human.segments.end(), [t](const HumanSegment& s) {
        return s.kind == HumanAction::Wrench && s.active(t) && !s.value.isZero(0.0);
      });
  r.guidance = (cfg_.human.guidance_active(t) || scripted_wrench || !live_wrench_.isZero(0.0))
                   ? 1.0
                   : 0.0;
  r.diss_c = out.constrained_damping_power;
  r.diss_u = out.motion_damping_power;
  r.relax_power = out.relaxation_power;
  r.discarded = out.tank_discarded;
  r.gate_c = out.gate_constrained;
  r.gate_u = out.gate_unconstrained;
  r.h = out.guidance_ratio;
  r.ds_energy = out.interaction_energy;

  ++step_;
  state_ = plant_step(state_, cfg_.plant, out.command(), external, dt);
  state_.time = static_cast<double>(step_) * dt;
  return last_;
}

Trace run_scenario(const ScenarioConfig& cfg) {
  Simulation sim(cfg);
  Trace trace;
  trace.dt = cfg.dt;
  trace.records.reserve(static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt)));
  while (!sim.finished()) {
    try {
      sim.step();
    } catch (const SimulationDiverged& e) {
      trace.records.push_back(sim.last());
      trace.aborted = e.what();
      break;
    }
    trace.records.push_back(sim.last());
  }
  return trace;
}

}  // namespace ific
