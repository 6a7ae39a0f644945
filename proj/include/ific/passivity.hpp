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

#include "ific/plant.hpp"
#include "ific/trace.hpp"
#include "ific/types.hpp"

namespace ific {

struct StorageBreakdown {
  double kinetic = 0.0;         ///< ½ x̃˙′ᵀΛx̃˙′
  double elastic = 0.0;         ///< ½ x̃′ᵀK_s x̃′
  double tank_force = 0.0;      ///< ½ z_f²
  double tank_impedance = 0.0;  ///< ½ z_i²
  double total = 0.0;
};

StorageBreakdown storage_value(const PlantState& state, const Vector6& setpoint,
                               const Twist& setpoint_velocity, double force_tank_energy,
                               double impedance_tank_energy, const Matrix6& stiffness,
                               const PlantModel& model);

struct BalanceResidual {
  double residual = 0.0;  ///< |x̃˙ᵀu₁ + ẋᵀu₂ + ẋ_dᵀu₃ − ẋᵀF_ext| [W]
  double scale = 1.0;     ///< 1 + sum of the magnitudes of the four terms
  double relative() const { return residual / scale; }
};

/// Power balance of the four-port interconnection, evaluated from logged signals.
BalanceResidual port_power_balance(const TraceRecord& record);

/// True when the residual exceeds 1e-6·(1 + |ẋᵀF_ext|).
bool balance_violated(const TraceRecord& record);

struct AuditOptions {
  double tolerance_base = 1e-3;     ///< [J]
  double tolerance_rate = 1e-4;     ///< [J/s]
  double prefactor_tolerance = 1e-9;  ///< [W]
};

struct AuditViolation {
  std::size_t index = 0;
  double t = 0.0;
  std::string term;  ///< "storage", "constrained_damping", "motion_damping" or "balance"
  double value = 0.0;
};

struct AuditReport {
  std::size_t records = 0;
  double max_balance_residual = 0.0;           ///< [W]
  double max_balance_relative = 0.0;
  std::vector<double> margin;                  ///< ∫ẋᵀF_ext − (V − V₀) per record [J]
  double min_margin = 0.0;
  double min_margin_slack = 0.0;               ///< min over t of margin + tol(t)
  double external_work = 0.0;                  ///< [J]
  double dissipated_constrained = 0.0;         ///< ∫ẋᵀD_d⟨D_i⟩ẋ·λ_c [J]
  double dissipated_motion = 0.0;              ///< ∫x̃˙′ᵀD_d[D_i]x̃˙′ [J]
  double discarded = 0.0;                      ///< tank overflow [J]
  std::size_t storage_violations = 0;
  std::size_t prefactor_violations = 0;
  std::size_t balance_violations = 0;
  std::optional<AuditViolation> first_violation;

  bool passed() const {
    return storage_violations == 0 && prefactor_violations == 0 && balance_violations == 0;
  }
};

/// Discrete audit of V(t) − V(0) ≤ ∫ẋᵀF_ext dt + tol(t). The external work between
/// consecutive records uses the trapezoidal velocity ½(ẋ_k + ẋ_{k+1}) against the wrench
/// applied over that period.
AuditReport passivity_audit(const std::vector<TraceRecord>& records, double dt,
                            const AuditOptions& options = {});

}  // namespace ific
