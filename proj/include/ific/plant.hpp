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

#include <optional>
#include <string>
#include <vector>

#include "ific/types.hpp"

namespace ific {

/// Cartesian rigid-body model Λẍ + μẋ + F_g = F. Gravity is pre-compensated.
struct PlantModel {
  Matrix6 inertia = default_inertia();
  Matrix6 coriolis = Matrix6::Zero();
  Wrench gravity = Wrench::Zero();

  static Matrix6 default_inertia();
  static PlantModel with_masses(double translational, double rotational);
};

struct PlantState {
  Vector3 position = Vector3::Zero();
  Vector3 orientation = Vector3::Zero();  ///< rotation vector [rad]
  Twist twist = Twist::Zero();
  double time = 0.0;

  /// position then rotation vector, the 6-vector used for pose errors
  Vector6 pose() const;
};

class SimulationDiverged : public Error {
 public:
  SimulationDiverged(const std::string& what, PlantState last_state)
      : Error(what), state_(std::move(last_state)) {}
  const PlantState& state() const { return state_; }

 private:
  PlantState state_;
};

/// Horizontal penalty surface z = surface_height with normal along +z.
struct EnvironmentModel {
  double surface_height = 0.0;
  double stiffness = 2e4;            ///< k_e [N/m]
  double damping = 200.0;            ///< d_e [N·s/m]
  double viscous = 0.02;             ///< b_v [N·s/m]
  double coulomb = 0.0;              ///< μ_c
  double smoothing_velocity = 1e-3;  ///< v_eps [m/s]

  static EnvironmentModel table();
  static EnvironmentModel phantom();
  static EnvironmentModel arm();
  void validate() const;
};

struct ContactWrench {
  Wrench wrench = Wrench::Zero();
  double normal_force = 0.0;  ///< ≥ 0
  double penetration = 0.0;   ///< > 0 in contact
};

ContactWrench environment_contact(const PlantState& state, const EnvironmentModel& env,
                                  double surface_offset = 0.0);
inline Wrench environment_wrench(const PlantState& state, const EnvironmentModel& env,
                                 double surface_offset = 0.0) {
  return environment_contact(state, env, surface_offset).wrench;
}

enum class HumanAction { Impulse, Guidance, Lift, Hold, ArmMotion, Wrench };

std::string to_string(HumanAction kind);
HumanAction human_action_from_string(const std::string& name);

struct HumanSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  HumanAction kind = HumanAction::Hold;

  // Impulse: half-sine pulse of `peak` along the unit `direction` over [t_start, t_end).
  Wrench direction = Wrench::Zero();
  double peak = 0.0;

  // Guidance and lift: a virtual hand spring dragging the end-effector from where it was
  // at t_start to anchor + displacement (or to `displacement` itself when absolute) over
  // `ramp` seconds, then holding there.
  Vector3 displacement = Vector3::Zero();
  Vector3 axes = Vector3::Zero();  ///< active axes; zero means the nonzeros of `displacement`
  bool absolute = false;           ///< `displacement` is a world position rather than an offset
  double ramp = 1.0;
  double hand_stiffness = 1000.0;  ///< [N/m]
  double hand_damping = 100.0;     ///< [N·s/m]
  double max_force = 40.0;         ///< [N]

  // ArmMotion: surface height changes by `rise` linearly over the segment and stays there.
  double rise = 0.0;

  // Wrench: constant wrench over the segment (replayed live input).
  Wrench value = Wrench::Zero();

  bool active(double t) const { return t >= t_start && t < t_end; }
};

struct HumanScript {
  std::vector<HumanSegment> segments;

  /// Throws ConfigError on overlapping or unordered segments. Wrench segments may overlap.
  void validate() const;
  /// Cumulative surface displacement from ArmMotion segments at time t.
  double surface_offset(double t) const;
  /// True while a guidance or lift segment is active.
  bool guidance_active(double t) const;
  bool any_active(double t) const;
};

/// Evaluates a HumanScript. Holds the anchor captured when each spring segment starts.
class HumanDriver {
 public:
  explicit HumanDriver(HumanScript script);

  Wrench wrench(const PlantState& state, double t);
  const HumanScript& script() const { return script_; }
  void reset();

 private:
  HumanScript script_;
  std::vector<std::optional<Vector3>> anchors_;
};

/// Pure evaluation of one segment given an anchor (used by HumanDriver).
Wrench human_segment_wrench(const HumanSegment& segment, const Vector3& anchor,
                            const PlantState& state, double t);

/// Semi-implicit Euler: twist += Λ⁻¹(F_ctrl + F_ext − μẋ − F_g)·dt, then the pose
/// integrates the new twist. Throws SimulationDiverged on non-finite results or once the
/// twist norm exceeds kDivergenceSpeed or the position norm kDivergenceReach.
inline constexpr double kDivergenceSpeed = 1e3;  ///< [m/s, rad/s]
inline constexpr double kDivergenceReach = 1e3;  ///< [m]
PlantState plant_step(const PlantState& state, const PlantModel& model, const Wrench& control,
                      const Wrench& external, double dt);

double kinetic_energy(const PlantState& state, const PlantModel& model);

}  // namespace ific
