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

#include "ific/types.hpp"

namespace ific {

/// Threshold placement of one chamber, as fractions of that chamber's budget.
/// The chamber is fully transparent (d = 1) from lower + hard upward and fully
/// attenuating (d = 1/ε) below lower + soft.
struct ChamberThresholds {
  double lower = 0.0;
  double soft = 0.2;
  double hard = 0.8;
};

struct TankParams {
  double total_budget = 1.0;        ///< ᵀ𝓔ᵘ [J]
  double interactive_budget = 0.1;  ///< ᴵ𝓔ᵘ [J]
  ChamberThresholds total_thresholds{0.0, 0.2, 0.8};
  ChamberThresholds interactive_thresholds{0.0, 0.2, 1.0};
  double valve_drain_rate = 0.03;  ///< valve power while interaction power is positive [W]
  double load_time = 2.0;          ///< t_l [s]; charging valve power is ᴵ𝓔ᵘ / t_l
  double p_drain = 1.0;
  double p_recover = 10.0;
  double epsilon = 1e-4;
  double z_min = 1e-2;
  bool interactive_enabled = true;

  void validate() const;
  double min_energy() const { return 0.5 * z_min * z_min; }
  double total_lower() const { return total_thresholds.lower * total_budget; }
  double total_soft() const { return total_thresholds.soft * total_budget; }
  double total_hard() const { return total_thresholds.hard * total_budget; }
  double interactive_lower() const { return interactive_thresholds.lower * interactive_budget; }
  double interactive_soft() const { return interactive_thresholds.soft * interactive_budget; }
  double interactive_hard() const { return interactive_thresholds.hard * interactive_budget; }
};

enum class Chamber { Total, Interactive };

struct TankState {
  double total_energy = 1.0;        ///< ᵀ𝓔 = z²/2
  double interactive_energy = 0.1;  ///< ᴵ𝓔
  bool lambda = false;
  double d_total = 1.0;
  double d_interactive = 1.0;

  double z() const;
  static TankState full(const TankParams& params);
};

/// Piecewise-cosine damping factor of one chamber, always in [1, 1/ε].
double chamber_damping(double energy, const TankParams& params, Chamber chamber,
                       bool drain_active);

struct DampingFactors {
  double total = 1.0;
  double interactive = 1.0;
  bool lambda = false;
  double product() const { return total * interactive; }
};

/// Damping factors and λ gate read from the start-of-cycle chamber energies.
DampingFactors current_damping(const TankState& tank, const TankParams& params,
                               double interaction_power);

/// Power moved from the upper into the interactive chamber this cycle.
double valve_power(const TankState& tank, double interaction_power, const TankParams& params,
                   double dt);

struct TankStepResult {
  TankState next;
  double d_total = 1.0;
  double d_interactive = 1.0;
  /// 1 while the interactive chamber sits below lower + hard (force tank: λ_c).
  bool lambda = false;
  double valve = 0.0;          ///< [W]
  double discarded = 0.0;      ///< energy dropped at the upper budget this cycle [J]
  bool drain_suppressed = false;
};

/// Shared update of one dual-chamber tank. `control_power` is the undamped port power 𝓟;
/// `interaction_power` is the interactive sub-port power (k_p P_c or k'_p P_u).
/// Damping factors are evaluated at the start-of-cycle energies and are the ones that
/// scale both the tank flow and the controller output this cycle.
TankStepResult tank_step(const TankState& tank, const TankParams& params, double control_power,
                         double interaction_power, double dt);

struct ForceTankPowers {
  double regulation = 0.0;     ///< ẋᵀF^r_f
  double constrained_damping = 0.0;  ///< ẋᵀD_d⟨D_i⟩ẋ (before λ_c)
  double interaction = 0.0;    ///< ẋᵀK_p[D_w]F_ext  (k_p P_c)
};

struct ImpedanceTankPowers {
  double counteraction = 0.0;  ///< ẋ_dᵀ(F'_f + F_ext)
  double motion_damping = 0.0; ///< x̃˙′ᵀD_d[D_i]x̃˙′
  double interaction = 0.0;    ///< ẋᵀK_p⟨D_w⟩F_ext  (k'_p P_u)
};

struct ForceTankStep {
  TankStepResult result;
  double control_power = 0.0;  ///< 𝓟_f
};

struct ImpedanceTankStep {
  TankStepResult result;
  double control_power = 0.0;  ///< 𝓟_i
};

/// 𝓟_f = −ẋᵀF^r_f + λ_c ẋᵀD_d⟨D_i⟩ẋ − k_p P_c with λ_c read from the start-of-cycle chamber.
ForceTankStep force_tank_step(const TankState& tank, const TankParams& params,
                              const ForceTankPowers& powers, double dt);

/// 𝓟_i = ẋ_dᵀ(F'_f + F_ext) + x̃˙′ᵀD_d[D_i]x̃˙′.
ImpedanceTankStep impedance_tank_step(const TankState& tank, const TankParams& params,
                                      const ImpedanceTankPowers& powers, double dt);

/// λ_c as a pure function of the interactive chamber energy.
bool constrained_damping_gate(double interactive_energy, const TankParams& params);

}  // namespace ific
