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

#include <string>
#include <vector>

#include <json.hpp>

#include "ific/config.hpp"
#include "ific/passivity.hpp"
#include "ific/scenarios.hpp"

namespace ific {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json to_json(const MetricsReport& report);
nlohmann::json to_json(const AuditReport& report);

/// One controller's run of a scenario with its metrics and passivity audit.
struct ControllerRun {
  ControllerKind controller = ControllerKind::Ific;
  Trace trace;
  MetricsReport metrics;
  AuditReport audit;
  double wall_seconds = 0.0;
};

ControllerRun run_controller(const RunConfig& cfg, ControllerKind controller);

/// Runs every controller on the identical scenario and seed, each as an independent job.
std::vector<ControllerRun> run_comparison(const RunConfig& cfg,
                                          const std::vector<ControllerKind>& controllers);

nlohmann::json comparison_report(const RunConfig& cfg, const std::vector<ControllerRun>& runs);

}  // namespace ific
