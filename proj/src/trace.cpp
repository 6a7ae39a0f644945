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

#include "ific/trace.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ific {
namespace {

template <typename Record, typename F>
void visit_impl(Record& r, F&& f) {
  auto scalar = [&](std::string_view name, auto& value) { f(name, value); };
  auto vec = [&](std::string_view name, auto& v) {
    static thread_local std::string buffer;
    for (int i = 0; i < 6; ++i) {
      buffer.assign(name);
      buffer += '_';
      buffer += static_cast<char>('0' + i);
      f(std::string_view(buffer), v(i));
    }
  };
  scalar("t", r.t);
  vec("pose", r.pose);
  vec("twist", r.twist);
  vec("setpoint", r.setpoint);
  vec("setpoint_velocity", r.setpoint_velocity);
  vec("xd", r.xd);
  vec("xd_dot", r.xd_dot);
  vec("f_ext", r.f_ext);
  vec("f_human", r.f_human);
  vec("f_d", r.f_d);
  vec("f_d_prime", r.f_d_prime);
  vec("f_f", r.f_f);
  vec("f_f_prime", r.f_f_prime);
  vec("f_imp", r.f_imp);
  vec("port_c", r.port_c);
  vec("port_r", r.port_r);
  vec("port_u", r.port_u);
  vec("port_du", r.port_du);
  scalar("p_c", r.p_c);
  scalar("p_u", r.p_u);
  scalar("tank_power_f", r.tank_power_f);
  scalar("tank_power_i", r.tank_power_i);
  scalar("e_ft", r.e_ft);
  scalar("e_fi", r.e_fi);
  scalar("e_it", r.e_it);
  scalar("e_ii", r.e_ii);
  scalar("d_ft", r.d_ft);
  scalar("d_fi", r.d_fi);
  scalar("d_it", r.d_it);
  scalar("d_ii", r.d_ii);
  scalar("lambda_c", r.lambda_c);
  scalar("v_kinetic", r.v_kinetic);
  scalar("v_elastic", r.v_elastic);
  scalar("v_tank_f", r.v_tank_f);
  scalar("v_tank_i", r.v_tank_i);
  scalar("v_total", r.v_total);
  scalar("balance_residual", r.balance_residual);
  scalar("contact_force", r.contact_force);
  scalar("penetration", r.penetration);
  scalar("guidance", r.guidance);
  scalar("diss_c", r.diss_c);
  scalar("diss_u", r.diss_u);
  scalar("relax_power", r.relax_power);
  scalar("discarded", r.discarded);
  scalar("gate_c", r.gate_c);
  scalar("gate_u", r.gate_u);
  scalar("h", r.h);
  scalar("ds_energy", r.ds_energy);
}

}  // namespace

void visit_columns(TraceRecord& record,
                   const std::function<void(std::string_view, double&)>& f) {
  visit_impl(record, [&](std::string_view n, double& v) { f(n, v); });
}

void visit_columns(const TraceRecord& record,
                   const std::function<void(std::string_view, double)>& f) {
  visit_impl(record, [&](std::string_view n, const double& v) { f(n, v); });
}

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> columns = [] {
    std::vector<std::string> names;
    visit_columns(TraceRecord{}, [&](std::string_view n, double) { names.emplace_back(n); });
    return names;
  }();
  return columns;
}

void write_trace_csv(const std::vector<TraceRecord>& records, std::ostream& out) {
  const auto& columns = trace_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << '\n';
  char buffer[40];
  for (const TraceRecord& r : records) {
    bool first = true;
    visit_columns(r, [&](std::string_view, double v) {
      const int n = std::snprintf(buffer, sizeof buffer, "%.17g", v);
      if (!first) out.put(',');
      out.write(buffer, n);
      first = false;
    });
    out.put('\n');
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace file is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header != trace_columns()) {
    throw ConfigError("trace header does not match schema version " +
                      std::to_string(kTraceSchemaVersion));
  }
  std::vector<TraceRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    TraceRecord r;
    const char* p = line.c_str();
    std::size_t count = 0;
    visit_columns(r, [&](std::string_view name, double& v) {
      char* end = nullptr;
      v = std::strtod(p, &end);
      if (end == p) {
        throw ConfigError("trace line " + std::to_string(line_no) + ": bad value in column " +
                          std::string(name));
      }
      p = (*end == ',') ? end + 1 : end;
      ++count;
    });
    if (*p != '\0') {
      throw ConfigError("trace line " + std::to_string(line_no) + ": too many columns");
    }
    records.push_back(r);
  }
  return records;
}

void write_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  write_trace_csv(trace.records, out);
  nlohmann::json sidecar;
  sidecar["schema_version"] = kTraceSchemaVersion;
  sidecar["dt"] = trace.dt;
  sidecar["records"] = trace.records.size();
  sidecar["config"] = trace.config;
  if (trace.aborted) sidecar["aborted"] = *trace.aborted;
  std::ofstream side(path + ".json");
  if (!side) throw ConfigError("cannot open " + path + ".json for writing");
  side << sidecar.dump(2) << '\n';
}

Trace read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace " + path);
  Trace trace;
  trace.records = read_trace_csv(in);
  std::ifstream side(path + ".json");
  if (side) {
    const nlohmann::json sidecar = nlohmann::json::parse(side);
    if (sidecar.value("schema_version", 0) != kTraceSchemaVersion) {
      throw ConfigError("trace sidecar has an unsupported schema_version");
    }
    trace.dt = sidecar.value("dt", trace.dt);
    trace.config = sidecar.value("config", nlohmann::json::object());
    if (sidecar.contains("aborted")) trace.aborted = sidecar["aborted"].get<std::string>();
  } else if (trace.records.size() >= 2) {
    trace.dt = trace.records[1].t - trace.records[0].t;
  }
  return trace;
}

std::uint64_t trace_hash(const std::vector<TraceRecord>& records) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const TraceRecord& r : records) {
    visit_columns(r, [&](std::string_view, double v) {
      auto bits = std::bit_cast<std::uint64_t>(v);
      for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
      }
    });
  }
  return h;
}

}  // namespace ific
