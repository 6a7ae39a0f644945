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

#include <algorithm>
#include <cmath>

#include "ific/scenarios.hpp"

namespace ific {
namespace {

bool in_mask(const TraceRecord& r, RmseMask mask) {
  switch (mask) {
    case RmseMask::Chambers: return r.d_fi == 1.0 && r.d_ii == 1.0;
    case RmseMask::Script: return r.guidance == 0.0 && r.f_human.isZero(0.0);
    case RmseMask::None: return true;
  }
  return true;
}

}  // namespace

double force_rmse(const std::vector<TraceRecord>& records, RmseMask mask) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const TraceRecord& r : records) {
    if (!in_mask(r, mask)) continue;
    sum += (r.f_d_prime + r.f_ext).squaredNorm();
    ++n;
  }
  if (n == 0) throw ConfigError("force RMSE mask selects no records");
  return std::sqrt(sum / static_cast<double>(n));
}

InteractionEfficiency interaction_efficiency(const std::vector<TraceRecord>& records, double dt,
                                             double work_budget) {
  InteractionEfficiency e;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const TraceRecord& r = records[i];
    if (r.guidance == 0.0) continue;
    e.work += std::max(r.p_u, 0.0) * dt;
    e.distance += (records[i + 1].pose.head<3>() - r.pose.head<3>()).norm();
    if (e.work >= work_budget) {
      e.budget_reached = true;
      break;
    }
  }
  if (!(e.work > 0.0)) throw ConfigError("interaction efficiency undefined: no human work");
  e.efficiency = e.distance / e.work;
  return e;
}

std::optional<double> recovery_time(const std::vector<TraceRecord>& records, TankSide side) {
  std::optional<std::size_t> last_positive;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TraceRecord& r = records[i];
    const double power = side == TankSide::Force ? r.port_c.dot(r.twist) : r.port_u.dot(r.twist);
    if (power > 0.0) last_positive = i;
  }
  if (!last_positive) return std::nullopt;
  for (std::size_t i = *last_positive + 1; i < records.size(); ++i) {
    const double d = side == TankSide::Force ? records[i].d_fi : records[i].d_ii;
    if (d == 1.0) return records[i].t - records[*last_positive].t;
  }
  return std::nullopt;
}

double peak_contact_force(const std::vector<TraceRecord>& records, double t_start,
                          double t_end) {
  double peak = 0.0;
  for (const TraceRecord& r : records) {
    if (r.t < t_start || (t_end >= 0.0 && r.t > t_end)) continue;
    peak = std::max(peak, std::abs(r.contact_force));
  }
  return peak;
}

std::optional<double> peak_velocity_after_contact_loss(const std::vector<TraceRecord>& records,
                                                       double t_from) {
  std::size_t i = 0;
  while (i < records.size() && (records[i].t < t_from || records[i].penetration > 0.0)) ++i;
  if (i == records.size()) return std::nullopt;
  double peak = 0.0;
  for (; i < records.size() && records[i].penetration <= 0.0; ++i) {
    peak = std::max(peak, records[i].twist.head<3>().norm());
  }
  return peak;
}

std::optional<double> recontact_peak_force(const std::vector<TraceRecord>& records,
                                           double t_from, double window) {
  std::size_t i = 0;
  while (i < records.size() && (records[i].t < t_from || records[i].penetration > 0.0)) ++i;
  while (i < records.size() && records[i].penetration <= 0.0) ++i;
  if (i == records.size()) return std::nullopt;
  const double t_contact = records[i].t;
  double peak = 0.0;
  for (; i < records.size() && records[i].t <= t_contact + window; ++i) {
    peak = std::max(peak, records[i].contact_force);
  }
  return peak;
}

MetricsReport compute_metrics(const Trace& trace, const MetricOptions& options) {
  MetricsReport m;
  const auto& rec = trace.records;
  if (rec.empty()) return m;
  m.rmse_unmasked = force_rmse(rec, RmseMask::None);
  m.rmse_samples = static_cast<std::size_t>(
      std::count_if(rec.begin(), rec.end(),
                    [&](const TraceRecord& r) { return in_mask(r, options.rmse_mask); }));
  m.rmse = m.rmse_samples > 0 ? force_rmse(rec, options.rmse_mask) : m.rmse_unmasked;
  const bool guided = std::any_of(rec.begin(), rec.end(), [](const TraceRecord& r) {
    return r.guidance != 0.0 && r.p_u > 0.0;
  });
  if (guided) {
    const InteractionEfficiency e = interaction_efficiency(rec, trace.dt, options.work_budget);
    m.interaction_efficiency = e.efficiency;
    m.human_work = e.work;
    m.guided_distance = e.distance;
    m.work_budget_reached = e.budget_reached;
  }
  m.peak_contact_force =
      peak_contact_force(rec, options.peak_window_start, options.peak_window_end);
  m.recovery_time_force = recovery_time(rec, TankSide::Force);
  m.recovery_time_impedance = recovery_time(rec, TankSide::Impedance);
  m.peak_velocity_after_loss = peak_velocity_after_contact_loss(rec, options.contact_loss_after);
  m.recontact_peak_force =
      recontact_peak_force(rec, options.contact_loss_after, options.recontact_window);
  return m;
}

}  // namespace ific
