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

#include "ific/tanks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ific {

void TankParams::validate() const {
  auto check = [](const ChamberThresholds& t, const char* name) {
    if (!(t.hard > t.soft) || t.soft < 0.0 || t.lower < 0.0) {
      throw ConfigError(std::string(name) + ": thresholds need hard > soft >= 0 and lower >= 0");
    }
  };
  check(total_thresholds, "total chamber");
  check(interactive_thresholds, "interactive chamber");
  if (!(total_budget > 0.0) || interactive_budget < 0.0 || interactive_budget > total_budget) {
    throw ConfigError("tank budgets need 0 <= interactive <= total, total > 0");
  }
  if (!(load_time > 0.0)) throw ConfigError("tank load_time must be > 0");
  if (valve_drain_rate < 0.0) throw ConfigError("tank valve_drain_rate must be >= 0");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("tank epsilon must lie in (0, 1)");
  if (!(z_min > 0.0)) throw ConfigError("tank z_min must be > 0");
  if (!(p_drain > 0.0 && p_recover > 0.0)) throw ConfigError("tank exponents must be > 0");
}

double TankState::z() const { return std::sqrt(2.0 * total_energy); }

TankState TankState::full(const TankParams& params) {
  TankState s;
  s.total_energy = params.total_budget;
  s.interactive_energy = params.interactive_enabled ? params.interactive_budget : 0.0;
  s.lambda = false;
  return s;
}

double chamber_damping(double energy, const TankParams& params, Chamber chamber,
                       bool drain_active) {
  const bool total = chamber == Chamber::Total;
  const double lower = total ? params.total_lower() : params.interactive_lower();
  const double soft = total ? params.total_soft() : params.interactive_soft();
  const double hard = total ? params.total_hard() : params.interactive_hard();
  if (energy >= lower + hard) return 1.0;
  if (energy < lower + soft) return 1.0 / params.epsilon;
  const double a = (energy - lower - soft) / (hard - soft);
  const double p = drain_active ? params.p_drain : params.p_recover;
  return std::max(1.0, 1.0 / (std::cos((1.0 - std::pow(a, p)) * std::numbers::pi / 2.0) +
                              params.epsilon));
}

double valve_power(const TankState& tank, double interaction_power, const TankParams& params,
                   double dt) {
  if (!params.interactive_enabled) return 0.0;
  const double nominal = interaction_power > 0.0 ? params.valve_drain_rate
                                                 : params.interactive_budget / params.load_time;
  const double ceiling = std::min(params.interactive_budget, tank.total_energy);
  const double headroom = std::max(0.0, ceiling - tank.interactive_energy);
  return std::min(nominal, headroom / dt);
}

bool constrained_damping_gate(double interactive_energy, const TankParams& params) {
  return interactive_energy < params.interactive_lower() + params.interactive_hard();
}

DampingFactors current_damping(const TankState& tank, const TankParams& params,
                               double interaction_power) {
  const bool drain_active = params.interactive_enabled && interaction_power > 0.0;
  DampingFactors d;
  d.total = chamber_damping(tank.total_energy, params, Chamber::Total, drain_active);
  d.interactive =
      params.interactive_enabled
          ? chamber_damping(tank.interactive_energy, params, Chamber::Interactive, drain_active)
          : 1.0;
  d.lambda = params.interactive_enabled
                 ? constrained_damping_gate(tank.interactive_energy, params)
                 : true;
  return d;
}

TankStepResult tank_step(const TankState& tank, const TankParams& params, double control_power,
                         double interaction_power, double dt) {
  TankStepResult out;
  const bool drain_active = params.interactive_enabled && interaction_power > 0.0;
  const DampingFactors d = current_damping(tank, params, interaction_power);
  out.d_total = d.total;
  out.d_interactive = d.interactive;
  out.lambda = d.lambda;

  TankState next = tank;
  double total = tank.total_energy + dt * control_power / (out.d_total * out.d_interactive);
  if (total < params.min_energy()) {
    out.drain_suppressed = true;
    total = std::max(tank.total_energy, params.min_energy());
  }
  if (total > params.total_budget) {
    out.discarded = total - params.total_budget;
    total = params.total_budget;
  }
  next.total_energy = total;

  if (params.interactive_enabled) {
    out.valve = valve_power(tank, interaction_power, params, dt);
    const double drain = drain_active ? interaction_power : 0.0;
    double inter = tank.interactive_energy + (out.valve - drain) * dt;
    inter = std::clamp(inter, 0.0, std::min(params.interactive_budget, total));
    next.interactive_energy = inter;
  } else {
    next.interactive_energy = 0.0;
  }
  next.lambda = out.lambda;
  next.d_total = out.d_total;
  next.d_interactive = out.d_interactive;
  out.next = next;
  return out;
}

ForceTankStep force_tank_step(const TankState& tank, const TankParams& params,
                              const ForceTankPowers& powers, double dt) {
  const bool lambda_c = params.interactive_enabled
                            ? constrained_damping_gate(tank.interactive_energy, params)
                            : true;
  ForceTankStep out;
  out.control_power = -powers.regulation + (lambda_c ? powers.constrained_damping : 0.0) -
                      powers.interaction;
  out.result = tank_step(tank, params, out.control_power, powers.interaction, dt);
  return out;
}

ImpedanceTankStep impedance_tank_step(const TankState& tank, const TankParams& params,
                                      const ImpedanceTankPowers& powers, double dt) {
  ImpedanceTankStep out;
  out.control_power = powers.counteraction + powers.motion_damping;
  out.result = tank_step(tank, params, out.control_power, powers.interaction, dt);
  return out;
}

}  // namespace ific
