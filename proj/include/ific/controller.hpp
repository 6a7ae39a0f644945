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

#include <array>
#include <memory>
#include <optional>
#include <string>

#include "ific/geometry.hpp"
#include "ific/plant.hpp"
#include "ific/tanks.hpp"
#include "ific/types.hpp"

namespace ific {

/// Desired motion and wrench at one instant. Patterns are expressed in `frame`.
struct Reference {
  Vector6 pose = Vector6::Zero();          ///< x_d, position + rotation vector
  Twist velocity = Twist::Zero();          ///< ẋ_d
  Vector6 acceleration = Vector6::Zero();  ///< ẍ_d
  Wrench frame_wrench = Wrench::Zero();    ///< F^𝓕_d
  Rotation frame;                          ///< ᵂR_𝓕
  BinaryPattern force_pattern;             ///< F^bin_d
  BinaryPattern motion_pattern;            ///< impedance directions

  /// F_d = blockdiag(R,R)·F^𝓕_d
  Wrench world_wrench() const { return frame.block() * frame_wrench; }
};

/// Controller gains. Force gains are given in the force frame and rotated each cycle.
struct GainSet {
  Matrix6 kp = 2.0 * Matrix6::Identity();
  Matrix6 ki = 2.0 * Matrix6::Identity();
  Matrix6 kd = 0.02 * Matrix6::Identity();
  Matrix6 stiffness = diagonal(800.0, 25.0);
  Matrix6 damping = diagonal(300.0, 3.0);

  static Matrix6 diagonal(double translational, double rotational);
  void validate() const;
};

struct WorldGains {
  Matrix6 kp;
  Matrix6 ki;
  Matrix6 kd;
};

WorldGains rotate_gains(const GainSet& gains, const Rotation& frame);

struct ForcePidParams {
  double windup_limit = 50.0;    ///< |K_i·integral| bound per force-frame axis [N]
  double rate_cutoff_hz = 50.0;  ///< first-order filter on the error derivative
};

struct ForcePidState {
  Vector6 integral = Vector6::Zero();        ///< ∫(F'_d + F_ext) [N·s]
  Vector6 prev_error = Vector6::Zero();      ///< [N]
  Vector6 filtered_rate = Vector6::Zero();   ///< [N/s]
  bool primed = false;
};

struct ForcePidResult {
  Wrench output = Wrench::Zero();              ///< F_f
  Wrench desired = Wrench::Zero();             ///< F'_d
  Wrench integral_derivative = Wrench::Zero(); ///< F^{i,d}_f = K_i∫ + K_d·rate + F_d
  ForcePidState state;
};

/// F'_d = R̄(F^𝓕_d + (F^bin_d − 1) ⊙ R̄ᵀF_ext)
Wrench desired_force_world(const Reference& reference, const Wrench& external);

/// Force PID with feed-forward. `integration_scale` ∈ [0,1] scales the integrator input
/// (controllers pass their current output attenuation so a detached loop does not wind up).
ForcePidResult force_pid(const ForcePidState& pid, const Reference& reference,
                         const Wrench& external, const WorldGains& gains,
                         const ForcePidParams& params, double dt, double integration_scale = 1.0);

/// The four force sub-port efforts.
struct ForcePorts {
  Wrench interaction_constrained = Wrench::Zero();    ///< K_p[D_w]F_ext
  Wrench regulation = Wrench::Zero();                 ///< F^r_f = K_p[D_w]F'_d + F^{i,d}_f
  Wrench interaction_unconstrained = Wrench::Zero();  ///< K_p⟨D_w⟩F_ext
  Wrench desired_unconstrained = Wrench::Zero();      ///< K_p⟨D_w⟩F'_d

  Wrench sum() const {
    return interaction_constrained + regulation + interaction_unconstrained +
           desired_unconstrained;
  }
};

/// Throws ConsistencyError when the parts miss F_f or ⟨D_w⟩(F'_d + F_ext) ≠ 0 beyond 1e-6.
ForcePorts split_force_ports(const ForcePidResult& pid, const Wrench& external,
                             const DirectionalBasis& force_basis, const WorldGains& gains);

/// F_imp = Λẍ_ff − λ_c D_d⟨D_i⟩ẋ − D_d[D_i](ẋ − ẋ'_d) − K_s(x − x'_d) + μẋ'_d + F_g
Wrench impedance_wrench(const PlantState& state, const Vector6& setpoint,
                        const Twist& setpoint_velocity, const Vector6& feedforward_acceleration,
                        bool lambda_c, const DirectionalBasis& motion_basis, const GainSet& gains,
                        const PlantModel& model);

/// Everything one control cycle produced; the controller-side half of a trace record.
struct ControllerOutput {
  Wrench raw_force = Wrench::Zero();       ///< F_f
  Wrench force = Wrench::Zero();           ///< F'_f
  Wrench impedance = Wrench::Zero();       ///< F_imp
  Wrench desired_force = Wrench::Zero();   ///< F_d (world)
  Wrench desired_force_prime = Wrench::Zero();  ///< F'_d
  ForcePorts ports;
  Vector6 reference_pose = Vector6::Zero();     ///< x_d actually tracked
  Twist reference_velocity = Twist::Zero();     ///< ẋ_d actually tracked
  Vector6 setpoint = Vector6::Zero();           ///< x'_d
  Twist setpoint_velocity = Twist::Zero();      ///< ẋ'_d
  bool lambda_c = true;
  double d_force_total = 1.0;
  double d_force_interactive = 1.0;
  double d_impedance_total = 1.0;
  double d_impedance_interactive = 1.0;
  double power_constrained = 0.0;    ///< P_c
  double power_unconstrained = 0.0;  ///< P_u
  double force_tank_power = 0.0;     ///< 𝓟_f
  double impedance_tank_power = 0.0; ///< 𝓟_i
  /// Start-of-cycle tank energies (consistent with the plant snapshot of this cycle).
  double force_total_energy = 0.0;
  double force_interactive_energy = 0.0;
  double impedance_total_energy = 0.0;
  double impedance_interactive_energy = 0.0;
  double constrained_damping_power = 0.0;  ///< ẋᵀD_d⟨D_i⟩ẋ
  double motion_damping_power = 0.0;       ///< x̃˙′ᵀD_d[D_i]x̃˙′
  double relaxation_power = 0.0;           ///< elastic power removed by setpoint relaxation
  double tank_discarded = 0.0;             ///< [J] this cycle
  Matrix6 stiffness = Matrix6::Zero();     ///< K_s in effect, for storage evaluation
  double gate_constrained = 1.0;           ///< LPF force gate
  double gate_unconstrained = 1.0;         ///< LPF impedance gate
  double guidance_ratio = 0.0;             ///< DS h
  double interaction_energy = 0.0;         ///< DS stored interaction energy [J]

  Wrench command() const { return force + impedance; }
};

struct ControlContext {
  const PlantState& state;
  const PlantModel& model;
  const Reference& reference;
  const Wrench& external;  ///< measured F_ext
  double dt;
};

/// Common interface of IFIC and the baselines: identical inputs, identical output shape.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual ControllerOutput step(const ControlContext& ctx) = 0;
  virtual void reset() = 0;
  virtual std::string name() const = 0;
  virtual bool has_tanks() const = 0;
  /// Adjusts a whitelisted live parameter. Returns false if the key is unknown here.
  virtual bool set_parameter(const std::string& key, double value) {
    (void)key;
    (void)value;
    return false;
  }
  virtual std::unique_ptr<Controller> clone() const = 0;
};

/// Bases and world gains, rebuilt only when frame or patterns change.
class FrameCache {
 public:
  void update(const Reference& reference, const GainSet& gains);
  const DirectionalBasis& force_basis() const { return force_basis_; }
  const DirectionalBasis& motion_basis() const { return motion_basis_; }
  const WorldGains& gains() const { return world_gains_; }

 private:
  bool valid_ = false;
  Rotation frame_;
  BinaryPattern force_pattern_;
  BinaryPattern motion_pattern_;
  Matrix6 kp_frame_ = Matrix6::Zero();
  Matrix6 ki_frame_ = Matrix6::Zero();
  Matrix6 kd_frame_ = Matrix6::Zero();
  DirectionalBasis force_basis_;
  DirectionalBasis motion_basis_;
  WorldGains world_gains_{};
};

/// Modified setpoint x'_d: advances by the reference displacement attenuated by 1/(d_iT·d_iI),
/// and while attenuated relaxes toward the end-effector along the motion directions.
class SetpointIntegrator {
 public:
  struct Result {
    Vector6 pose;
    Twist velocity;
    Vector6 feedforward;   ///< d/dt ẋ'_d
    double relaxation_power = 0.0;
  };

  Result advance(const Reference& reference, const PlantState& state, double velocity_scale,
                 double relax_rate, const DirectionalBasis& motion_basis, const Matrix6& stiffness,
                 double dt);
  void reset() { primed_ = false; }

 private:
  bool primed_ = false;
  Vector6 setpoint_ = Vector6::Zero();
  Vector6 last_reference_pose_ = Vector6::Zero();
  double last_scale_ = 1.0;
};

struct IficParams {
  GainSet gains;
  ForcePidParams pid;
  TankParams force_tank;
  TankParams impedance_tank = default_impedance_tank();
  /// Rate [1/s] at which a detached impedance setpoint is pulled onto the end-effector.
  double setpoint_relax_rate = 20.0;
  /// Holds both tanks full with λ_c = 1: the plain unified law.
  bool pin_tanks = false;

  static TankParams default_impedance_tank();
  void validate() const;
};

/// Unified force-impedance control with valve-controlled dual-chamber tanks. With the
/// interactive chambers disabled this is UFIC.
class IficController final : public Controller {
 public:
  explicit IficController(IficParams params, std::string name = "ific");

  ControllerOutput step(const ControlContext& ctx) override;
  void reset() override;
  std::string name() const override { return name_; }
  bool has_tanks() const override { return !params_.pin_tanks; }
  bool set_parameter(const std::string& key, double value) override;
  std::unique_ptr<Controller> clone() const override;

  const IficParams& params() const { return params_; }
  const TankState& force_tank() const { return force_tank_; }
  const TankState& impedance_tank() const { return impedance_tank_; }
  void set_tanks(const TankState& force, const TankState& impedance);

 private:
  IficParams params_;
  std::string name_;
  FrameCache cache_;
  ForcePidState pid_;
  SetpointIntegrator setpoint_;
  TankState force_tank_;
  TankState impedance_tank_;
  double last_force_attenuation_ = 1.0;
};

/// UFIC: the same controller with interactive chambers off and total budgets `budget`.
IficParams ufic_params(IficParams base, double budget = 0.8);

}  // namespace ific
