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

#include <json.hpp>

#include "ific/scenarios.hpp"

namespace ific {

inline constexpr int kConfigSchemaVersion = 1;

struct TelemetryConfig {
  double snapshot_hz = 30.0;
  double realtime_factor = 1.0;
  double max_wrench = 60.0;  ///< clamp on live wrench norm [N]
};

struct RunConfig {
  ScenarioConfig scenario;
  std::string trace_path;
  TelemetryConfig telemetry;
};

/// Parameter presets exp1 to exp4 with their task and environment. "exp1" is the default.
ScenarioConfig preset(const std::string& name);

/// Parses JSON text. Empty text yields the exp1 defaults. Unknown keys, wrong types and
/// invalid values raise ConfigError naming the key path and its line.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

/// Fully resolved configuration; feeding it back through parse_config_text reproduces it.
nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json to_json(const HumanScript& script);
HumanScript human_script_from_json(const nlohmann::json& j);

}  // namespace ific
