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

#include "ific/plant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Geometry>
#include <Eigen/LU>

namespace ific {

namespace {

Matrix3 rotation_from_vector(const Vector3& v) {
  const double angle = v.norm();
  if (angle < 1e-15) return Matrix3::Identity();
  return Eigen::AngleAxisd(angle, v / angle).toRotationMatrix();
}

Vector3 vector_from_rotation(const Matrix3& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.axis() * aa.angle();
}

}  // namespace

Matrix6 PlantModel::default_inertia() {
  Vector6 diag;
  diag << 10.0, 10.0, 10.0, 1.0, 1.0, 1.0;
  return diag.asDiagonal();
}

PlantModel PlantModel::with_masses(double translational, double rotational) {
  PlantModel model;
  Vector6 diag;
  diag << translational, translational, translational, rotational, rotational, rotational;
  model.inertia = diag.asDiagonal();
  return model;
}

Vector6 PlantState::pose() const {
  Vector6 p;
  p << position, orientation;
  return p;
}

EnvironmentModel EnvironmentModel::table() { return {}; }

EnvironmentModel EnvironmentModel::phantom() {
  EnvironmentModel env;
  env.stiffness = 1.5e3;
  env.damping = 50.0;
  return env;
}

EnvironmentModel EnvironmentModel::arm() {
  EnvironmentModel env;
  env.stiffness = 1.5e3;
  env.damping = 50.0;
  return env;
}

void EnvironmentModel::validate() const {
  if (stiffness < 0 || damping < 0 || viscous < 0 || coulomb < 0) {
    throw ConfigError("environment coefficients must be non-negative");
  }
  if (!(smoothing_velocity > 0)) throw ConfigError("environment.smoothing_velocity must be > 0");
}

ContactWrench environment_contact(const PlantState& state, const EnvironmentModel& env,
                                  double surface_offset) {
  ContactWrench out;
  const double penetration = env.surface_height + surface_offset - state.position.z();
  if (penetration <= 0.0) return out;
  out.penetration = penetration;
  const double normal = std::max(0.0, env.stiffness * penetration - env.damping * state.twist[2]);
  const Eigen::Vector2d tangential_velocity = state.twist.head<2>();
  const double coefficient =
      env.viscous + env.coulomb * normal / (tangential_velocity.norm() + env.smoothing_velocity);
  out.wrench.head<2>() = -coefficient * tangential_velocity;
  out.wrench[2] = normal;
  out.normal_force = normal;
  return out;
}

std::string to_string(HumanAction kind) {
  switch (kind) {
    case HumanAction::Impulse: return "impulse";
    case HumanAction::Guidance: return "guidance";
    case HumanAction::Lift: return "lift";
    case HumanAction::Hold: return "hold";
    case HumanAction::ArmMotion: return "arm_motion";
    case HumanAction::Wrench: return "wrench";
  }
  return "hold";
}

HumanAction human_action_from_string(const std::string& name) {
  for (auto kind : {HumanAction::Impulse, HumanAction::Guidance, HumanAction::Lift,
                    HumanAction::Hold, HumanAction::ArmMotion, HumanAction::Wrench}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown human action kind '" + name + "'");
}

void HumanScript::validate() const {
  double previous_end = -std::numeric_limits<double>::infinity();
  for (const auto& s : segments) {
    if (!std::isfinite(s.t_start) || !std::isfinite(s.t_end) || s.t_end <= s.t_start) {
      throw ConfigError("human segment must satisfy t_start < t_end");
    }
    if (s.kind == HumanAction::Wrench) continue;
    if (s.t_start < previous_end) {
      throw ConfigError("human segments overlap or are not ordered by time (segment at t=" +
                        std::to_string(s.t_start) + ")");
    }
    previous_end = s.t_end;
    switch (s.kind) {
      case HumanAction::Impulse:
        if (s.direction.norm() == 0.0) throw ConfigError("impulse segment needs a direction");
        break;
      case HumanAction::Guidance:
      case HumanAction::Lift:
        if (!(s.ramp > 0) || s.hand_stiffness < 0 || s.hand_damping < 0 || !(s.max_force > 0)) {
          throw ConfigError("spring segment needs ramp > 0, max_force > 0, non-negative gains");
        }
        break;
      default:
        break;
    }
  }
}

double HumanScript::surface_offset(double t) const {
  double offset = 0.0;
  for (const auto& s : segments) {
    if (s.kind != HumanAction::ArmMotion || t < s.t_start) continue;
    const double fraction = std::min(1.0, (t - s.t_start) / (s.t_end - s.t_start));
    offset += s.rise * fraction;
  }
  return offset;
}

bool HumanScript::guidance_active(double t) const {
  return std::any_of(segments.begin(), segments.end(), [t](const HumanSegment& s) {
    return s.active(t) && (s.kind == HumanAction::Guidance || s.kind == HumanAction::Lift);
  });
}

bool HumanScript::any_active(double t) const {
  return std::any_of(segments.begin(), segments.end(), [t](const HumanSegment& s) {
    return s.active(t) && s.kind != HumanAction::Hold;
  });
}

Wrench human_segment_wrench(const HumanSegment& segment, const Vector3& anchor,
                            const PlantState& state, double t) {
  Wrench out = Wrench::Zero();
  if (!segment.active(t)) return out;
  switch (segment.kind) {
    case HumanAction::Impulse: {
      const double phase = (t - segment.t_start) / (segment.t_end - segment.t_start);
      out = segment.peak * std::sin(std::numbers::pi * phase) * segment.direction.normalized();
      break;
    }
    case HumanAction::Guidance:
    case HumanAction::Lift: {
      const double s = std::clamp((t - segment.t_start) / segment.ramp, 0.0, 1.0);
      const double profile = 0.5 * (1.0 - std::cos(std::numbers::pi * s));
      const double rate = s < 1.0 ? 0.5 * std::numbers::pi * std::sin(std::numbers::pi * s) /
                                        segment.ramp
                                  : 0.0;
      Vector3 axes = segment.axes;
      if (axes.isZero()) {
        for (int i = 0; i < 3; ++i) axes[i] = segment.displacement[i] != 0.0 ? 1.0 : 0.0;
      }
      const Vector3 offset =
          segment.absolute ? Vector3(segment.displacement - anchor) : segment.displacement;
      const Vector3 target = anchor + profile * offset;
      const Vector3 target_velocity = rate * offset;
      Vector3 force = segment.hand_stiffness * (target - state.position) +
                      segment.hand_damping * (target_velocity - state.twist.head<3>());
      force = force.cwiseProduct(axes);
      const double magnitude = force.norm();
      if (magnitude > segment.max_force) force *= segment.max_force / magnitude;
      out.head<3>() = force;
      break;
    }
    case HumanAction::Wrench:
      out = segment.value;
      break;
    case HumanAction::Hold:
    case HumanAction::ArmMotion:
      break;
  }
  return out;
}

HumanDriver::HumanDriver(HumanScript script) : script_(std::move(script)) {
  script_.validate();
  anchors_.assign(script_.segments.size(), std::nullopt);
}

void HumanDriver::reset() { anchors_.assign(script_.segments.size(), std::nullopt); }

Wrench HumanDriver::wrench(const PlantState& state, double t) {
  Wrench total = Wrench::Zero();
  for (std::size_t i = 0; i < script_.segments.size(); ++i) {
    const auto& segment = script_.segments[i];
    if (!segment.active(t)) continue;
    if (!anchors_[i]) anchors_[i] = state.position;
    total += human_segment_wrench(segment, *anchors_[i], state, t);
  }
  return total;
}

PlantState plant_step(const PlantState& state, const PlantModel& model, const Wrench& control,
                      const Wrench& external, double dt) {
  const Vector6 net = control + external - model.coriolis * state.twist - model.gravity;
  const Vector6 acceleration = model.inertia.ldlt().solve(net);
  if (!acceleration.allFinite()) {
    throw SimulationDiverged("non-finite acceleration at t=" + std::to_string(state.time), state);
  }
  PlantState next = state;
  next.twist = state.twist + acceleration * dt;
  next.position = state.position + next.twist.head<3>() * dt;
  if (!next.twist.tail<3>().isZero(0.0)) {
    const Matrix3 rotation =
        rotation_from_vector(next.twist.tail<3>() * dt) * rotation_from_vector(state.orientation);
    next.orientation = vector_from_rotation(rotation);
  }
  next.time = state.time + dt;
  if (!next.twist.allFinite() || !next.position.allFinite() || !next.orientation.allFinite()) {
    throw SimulationDiverged("non-finite state at t=" + std::to_string(next.time), state);
  }
  if (next.twist.norm() > kDivergenceSpeed || next.position.norm() > kDivergenceReach) {
    throw SimulationDiverged("state left the plausible range at t=" + std::to_string(next.time),
                             state);
  }
  return next;
}

double kinetic_energy(const PlantState& state, const PlantModel& model) {
  return 0.5 * state.twist.dot(model.inertia * state.twist);
}

}  // namespace ific
