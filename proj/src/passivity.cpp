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

#include "ific/passivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ific {

StorageBreakdown storage_value(const PlantState& state, const Vector6& setpoint,
                               const Twist& setpoint_velocity, double force_tank_energy,
                               double impedance_tank_energy, const Matrix6& stiffness,
                               const PlantModel& model) {
  StorageBreakdown s;
  const Twist velocity_error = state.twist - setpoint_velocity;
  const Vector6 pose_error = state.pose() - setpoint;
  s.kinetic = 0.5 * velocity_error.dot(model.inertia * velocity_error);
  s.elastic = 0.5 * pose_error.dot(stiffness * pose_error);
  s.tank_force = force_tank_energy;
  s.tank_impedance = impedance_tank_energy;
  s.total = s.kinetic + s.elastic + s.tank_force + s.tank_impedance;
  return s;
}

BalanceResidual port_power_balance(const TraceRecord& r) {
  const Wrench u1 = r.f_ext + r.f_f;
  const Wrench u2 = -r.port_c - r.port_r;
  const Wrench u3 = r.f_f + r.f_ext;
  const double a = (r.twist - r.xd_dot).dot(u1);
  const double b = r.twist.dot(u2);
  const double c = r.xd_dot.dot(u3);
  const double e = r.twist.dot(r.f_ext);
  BalanceResidual out;
  out.residual = std::abs(a + b + c - e);
  out.scale = 1.0 + std::abs(a) + std::abs(b) + std::abs(c) + std::abs(e);
  return out;
}

bool balance_violated(const TraceRecord& record) {
  const BalanceResidual b = port_power_balance(record);
  return b.residual > 1e-6 * (1.0 + std::abs(record.twist.dot(record.f_ext)));
}

AuditReport passivity_audit(const std::vector<TraceRecord>& records, double dt,
                            const AuditOptions& options) {
  AuditReport report;
  report.records = records.size();
  if (records.empty()) return report;
  report.margin.reserve(records.size());
  report.min_margin = std::numeric_limits<double>::infinity();
  report.min_margin_slack = std::numeric_limits<double>::infinity();

  const double v0 = records.front().v_total;
  const double t0 = records.front().t;
  double work = 0.0;
  auto flag = [&](std::size_t i, const char* term, double value) {
    if (!report.first_violation) report.first_violation = AuditViolation{i, records[i].t, term, value};
  };

  for (std::size_t i = 0; i < records.size(); ++i) {
    const TraceRecord& r = records[i];
    if (i > 0) {
      const TraceRecord& p = records[i - 1];
      work += 0.5 * (p.twist + r.twist).dot(p.f_ext) * dt;
    }
    const double margin = work - (r.v_total - v0);
    const double tol = options.tolerance_base + options.tolerance_rate * (r.t - t0);
    report.margin.push_back(margin);
    report.min_margin = std::min(report.min_margin, margin);
    report.min_margin_slack = std::min(report.min_margin_slack, margin + tol);
    if (margin < -tol) {
      ++report.storage_violations;
      flag(i, "storage", margin);
    }

    const double constrained =
        (r.lambda_c / (r.d_ft * r.d_fi) - 1.0) * r.diss_c;
    const double motion = (1.0 / (r.d_it * r.d_ii) - 1.0) * r.diss_u;
    if (constrained > options.prefactor_tolerance) {
      ++report.prefactor_violations;
      flag(i, "constrained_damping", constrained);
    }
    if (motion > options.prefactor_tolerance) {
      ++report.prefactor_violations;
      flag(i, "motion_damping", motion);
    }

    const BalanceResidual b = port_power_balance(r);
    report.max_balance_residual = std::max(report.max_balance_residual, b.residual);
    report.max_balance_relative = std::max(report.max_balance_relative, b.relative());
    if (balance_violated(r)) {
      ++report.balance_violations;
      flag(i, "balance", b.residual);
    }

    report.dissipated_constrained += r.lambda_c * r.diss_c * dt;
    report.dissipated_motion += r.diss_u * dt;
    report.discarded += r.discarded;
  }
  report.external_work = work;
  return report;
}

}  // namespace ific
