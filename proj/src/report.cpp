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

#include "ific/report.hpp"

#include <chrono>
#include <future>

namespace ific {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const MetricsReport& m) {
  return {
      {"force_rmse", m.rmse},
      {"force_rmse_unmasked", m.rmse_unmasked},
      {"force_rmse_samples", m.rmse_samples},
      {"interaction_efficiency", optional_number(m.interaction_efficiency)},
      {"human_work", m.human_work},
      {"guided_distance", m.guided_distance},
      {"work_budget_reached", m.work_budget_reached},
      {"peak_contact_force", m.peak_contact_force},
      {"recovery_time_force", optional_number(m.recovery_time_force)},
      {"recovery_time_impedance", optional_number(m.recovery_time_impedance)},
      {"peak_velocity_after_contact_loss", optional_number(m.peak_velocity_after_loss)},
      {"recontact_peak_force", optional_number(m.recontact_peak_force)},
  };
}

json to_json(const AuditReport& a) {
  json out = {
      {"passed", a.passed()},
      {"records", a.records},
      {"storage_violations", a.storage_violations},
      {"prefactor_violations", a.prefactor_violations},
      {"balance_violations", a.balance_violations},
      {"min_margin", a.min_margin},
      {"min_margin_slack", a.min_margin_slack},
      {"max_balance_residual", a.max_balance_residual},
      {"max_balance_relative", a.max_balance_relative},
      {"external_work", a.external_work},
      {"dissipated_constrained", a.dissipated_constrained},
      {"dissipated_motion", a.dissipated_motion},
      {"discarded", a.discarded},
      {"first_violation", nullptr},
  };
  if (a.first_violation) {
    out["first_violation"] = {{"index", a.first_violation->index},
                              {"t", a.first_violation->t},
                              {"term", a.first_violation->term},
                              {"value", a.first_violation->value}};
  }
  return out;
}

ControllerRun run_controller(const RunConfig& cfg, ControllerKind controller) {
  RunConfig local = cfg;
  local.scenario.controller = controller;
  ControllerRun run;
  run.controller = controller;
  const auto start = std::chrono::steady_clock::now();
  run.trace = run_scenario(local.scenario);
  run.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  run.trace.config = to_json(local);
  run.metrics = compute_metrics(run.trace, local.scenario.metrics);
  run.audit = passivity_audit(run.trace.records, run.trace.dt);
  return run;
}

std::vector<ControllerRun> run_comparison(const RunConfig& cfg,
                                          const std::vector<ControllerKind>& controllers) {
  std::vector<std::future<ControllerRun>> jobs;
  jobs.reserve(controllers.size());
  for (ControllerKind kind : controllers) {
    jobs.push_back(std::async(std::launch::async, run_controller, std::cref(cfg), kind));
  }
  std::vector<ControllerRun> runs;
  runs.reserve(jobs.size());
  for (auto& job : jobs) runs.push_back(job.get());
  return runs;
}

json comparison_report(const RunConfig& cfg, const std::vector<ControllerRun>& runs) {
  json rows = json::array();
  for (const ControllerRun& run : runs) {
    rows.push_back({{"controller", to_string(run.controller)},
                    {"records", run.trace.records.size()},
                    {"aborted", run.trace.aborted ? json(*run.trace.aborted) : json(nullptr)},
                    {"trace_hash", run.trace.records.empty()
                                       ? std::string()
                                       : std::to_string(trace_hash(run.trace.records))},
                    {"metrics", to_json(run.metrics)},
                    {"audit", to_json(run.audit)}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"scenario", cfg.scenario.name},
          {"task", to_string(cfg.scenario.task)},
          {"duration", cfg.scenario.duration},
          {"dt", cfg.scenario.dt},
          {"seed", cfg.scenario.seed},
          {"controllers", rows}};
}

}  // namespace ific
