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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ific/types.hpp"

namespace ific {

inline constexpr int kTraceSchemaVersion = 1;

/// One control cycle. Plant quantities are the state at t, tank energies are the
/// start-of-cycle values, so every column describes the same instant.
struct TraceRecord {
  double t = 0.0;
  Vector6 pose = Vector6::Zero();
  Twist twist = Twist::Zero();
  Vector6 setpoint = Vector6::Zero();           ///< x'_d
  Twist setpoint_velocity = Twist::Zero();      ///< ẋ'_d
  Vector6 xd = Vector6::Zero();                 ///< x_d
  Twist xd_dot = Twist::Zero();                 ///< ẋ_d
  Wrench f_ext = Wrench::Zero();
  Wrench f_human = Wrench::Zero();
  Wrench f_d = Wrench::Zero();
  Wrench f_d_prime = Wrench::Zero();
  Wrench f_f = Wrench::Zero();
  Wrench f_f_prime = Wrench::Zero();
  Wrench f_imp = Wrench::Zero();
  Wrench port_c = Wrench::Zero();   ///< K_p[D_w]F_ext
  Wrench port_r = Wrench::Zero();   ///< F^r_f
  Wrench port_u = Wrench::Zero();   ///< K_p⟨D_w⟩F_ext
  Wrench port_du = Wrench::Zero();  ///< K_p⟨D_w⟩F'_d
  double p_c = 0.0;
  double p_u = 0.0;
  double tank_power_f = 0.0;
  double tank_power_i = 0.0;
  double e_ft = 0.0;
  double e_fi = 0.0;
  double e_it = 0.0;
  double e_ii = 0.0;
  double d_ft = 1.0;
  double d_fi = 1.0;
  double d_it = 1.0;
  double d_ii = 1.0;
  double lambda_c = 1.0;
  double v_kinetic = 0.0;
  double v_elastic = 0.0;
  double v_tank_f = 0.0;
  double v_tank_i = 0.0;
  double v_total = 0.0;
  double balance_residual = 0.0;
  double contact_force = 0.0;
  double penetration = 0.0;
  double guidance = 0.0;
  double diss_c = 0.0;
  double diss_u = 0.0;
  double relax_power = 0.0;
  double discarded = 0.0;
  double gate_c = 1.0;
  double gate_u = 1.0;
  double h = 0.0;
  double ds_energy = 0.0;
};

/// Calls `f(column_name, value)` for every scalar column in header order.
void visit_columns(TraceRecord& record, const std::function<void(std::string_view, double&)>& f);
void visit_columns(const TraceRecord& record,
                   const std::function<void(std::string_view, double)>& f);

const std::vector<std::string>& trace_columns();

struct Trace {
  double dt = 1e-3;
  std::vector<TraceRecord> records;
  nlohmann::json config = nlohmann::json::object();
  /// Set when the run stopped early; records hold everything up to that point.
  std::optional<std::string> aborted;
};

/// Writes `path` as CSV and `path + ".json"` as the sidecar with the resolved config.
void write_trace(const Trace& trace, const std::string& path);
/// Reads the CSV and, when present, its sidecar.
Trace read_trace(const std::string& path);

void write_trace_csv(const std::vector<TraceRecord>& records, std::ostream& out);
std::vector<TraceRecord> read_trace_csv(std::istream& in);

/// FNV-1a over the bit patterns of every column of every record.
std::uint64_t trace_hash(const std::vector<TraceRecord>& records);

}  // namespace ific
