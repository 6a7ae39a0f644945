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

#include "ific/live.hpp"

#include <algorithm>
#include <limits>

namespace ific {

using nlohmann::json;

namespace {

const json& require(const json& message, const char* key) {
  auto it = message.find(key);
  if (it == message.end()) throw ProtocolError(std::string("missing field '") + key + "'");
  return *it;
}

json vec(const Vector6& v) { return json(std::vector<double>(v.data(), v.data() + 6)); }

}  // namespace

Command parse_command(const std::string& text) {
  json message;
  try {
    message = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("invalid json: ") + e.what());
  }
  if (!message.is_object()) throw ProtocolError("message must be an object");
  const json& type = require(message, "type");
  if (!type.is_string()) throw ProtocolError("'type' must be a string");
  const std::string kind = type.get<std::string>();

  if (kind == "wrench") {
    const json& value = require(message, "value");
    if (!value.is_array() || value.size() != 6) throw ProtocolError("'value' must be 6 numbers");
    WrenchCommand c;
    for (int i = 0; i < 6; ++i) {
      if (!value[i].is_number()) throw ProtocolError("'value' must be 6 numbers");
      c.value[i] = value[i].get<double>();
      if (!std::isfinite(c.value[i])) throw ProtocolError("'value' must be finite");
    }
    return c;
  }
  if (kind == "set_param") {
    const json& key = require(message, "key");
    const json& value = require(message, "value");
    if (!key.is_string()) throw ProtocolError("'key' must be a string");
    if (!value.is_number() || !std::isfinite(value.get<double>())) {
      throw ProtocolError("'value' must be a finite number");
    }
    return SetParamCommand{key.get<std::string>(), value.get<double>()};
  }
  if (kind == "pause") return PauseCommand{};
  if (kind == "resume") return ResumeCommand{};
  if (kind == "reset") return ResetCommand{};
  if (kind == "select_controller") {
    const json& name = require(message, "controller");
    if (!name.is_string()) throw ProtocolError("'controller' must be a string");
    try {
      return SelectControllerCommand{controller_from_string(name.get<std::string>())};
    } catch (const ConfigError& e) {
      throw ProtocolError(e.what());
    }
  }
  throw ProtocolError("unknown message type '" + kind + "'");
}

json error_message(const std::string& what) {
  return {{"type", "error"}, {"message", what}};
}

LiveSession::LiveSession(RunConfig cfg) : cfg_(std::move(cfg)), sim_(cfg_.scenario) {}

std::optional<json> LiveSession::apply(const Command& command) {
  const double limit = cfg_.telemetry.max_wrench;
  return std::visit(
      [&](const auto& c) -> std::optional<json> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, WrenchCommand>) {
          Wrench w = c.value;
          for (int i = 0; i < 3; ++i) w[i] = std::clamp(w[i], -limit, limit);
          for (int i = 3; i < 6; ++i) w[i] = std::clamp(w[i], -0.1 * limit, 0.1 * limit);
          close_segment();
          if (!w.isZero(0.0)) {
            HumanSegment s;
            s.kind = HumanAction::Wrench;
            s.t_start = (static_cast<double>(sim_.steps_taken()) - 0.5) * cfg_.scenario.dt;
            s.value = w;
            open_ = s;
          }
          sim_.set_live_wrench(w);
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, SetParamCommand>) {
          bool accepted = false;
          try {
            accepted = sim_.set_parameter(c.key, c.value);
          } catch (const ConfigError& e) {
            return error_message("parameter '" + c.key + "': " + e.what());
          }
          if (!accepted) {
            return error_message("parameter '" + c.key + "' is unknown or not live-tunable");
          }
          return json{{"type", "ack"}, {"command", "set_param"}, {"key", c.key}, {"value", c.value}};
        } else if constexpr (std::is_same_v<T, PauseCommand>) {
          paused_ = true;
          return json{{"type", "ack"}, {"command", "pause"}};
        } else if constexpr (std::is_same_v<T, ResumeCommand>) {
          paused_ = false;
          return json{{"type", "ack"}, {"command", "resume"}};
        } else if constexpr (std::is_same_v<T, ResetCommand>) {
          sim_.reset();
          recorded_.clear();
          open_.reset();
          return json{{"type", "ack"}, {"command", "reset"}};
        } else {
          cfg_.scenario.controller = c.kind;
          sim_.select_controller(c.kind);
          sim_.reset();
          recorded_.clear();
          open_.reset();
          return json{{"type", "ack"}, {"command", "select_controller"},
                      {"controller", to_string(c.kind)}};
        }
      },
      command);
}

void LiveSession::close_segment() {
  if (!open_) return;
  open_->t_end = (static_cast<double>(sim_.steps_taken()) - 0.5) * cfg_.scenario.dt;
  if (open_->t_end > open_->t_start) recorded_.push_back(*open_);
  open_.reset();
}

bool LiveSession::advance() {
  if (paused_) return false;
  sim_.step();
  return true;
}

json LiveSession::snapshot() const {
  const TraceRecord& r = sim_.last();
  const bool stepped = sim_.steps_taken() > 0;
  const PlantState& s = sim_.state();
  json out;
  out["type"] = "state";
  out["schema_version"] = kProtocolVersion;
  out["t"] = stepped ? r.t : 0.0;
  out["pose"] = vec(stepped ? r.pose : s.pose());
  out["twist"] = vec(stepped ? r.twist : s.twist);
  out["tanks"] = {{"Ef", r.e_ft}, {"EIf", r.e_fi}, {"Ei", r.e_it}, {"EIi", r.e_ii}};
  out["damping"] = stepped ? json{r.d_ft, r.d_fi, r.d_it, r.d_ii} : json{1.0, 1.0, 1.0, 1.0};
  out["powers"] = {{"Pc", r.p_c}, {"Pu", r.p_u}};
  out["forces"] = {{"Fext", vec(r.f_ext)}, {"Fpf", vec(r.f_f_prime)}, {"Fimp", vec(r.f_imp)}};
  out["lambda_c"] = r.lambda_c != 0.0;
  out["setpoint"] = vec(stepped ? r.setpoint : s.pose());
  out["surface_height"] =
      cfg_.scenario.environment.surface_height + cfg_.scenario.human.surface_offset(r.t);
  out["controller"] = to_string(cfg_.scenario.controller);
  out["paused"] = paused_;
  return out;
}

HumanScript LiveSession::recorded_script() const {
  HumanScript script = cfg_.scenario.human;
  for (const HumanSegment& s : recorded_) script.segments.push_back(s);
  if (open_) {
    HumanSegment s = *open_;
    s.t_end = std::numeric_limits<double>::max();
    script.segments.push_back(s);
  }
  return script;
}

}  // namespace ific
