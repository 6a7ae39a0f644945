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

#include "ific/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ific {
namespace {

using nlohmann::json;

class Section {
 public:
  Section(const json& node, std::string path, const std::string& text)
      : node_(node), path_(std::move(path)), text_(text) {
    if (!node_.is_object()) fail("", "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(node_.at(key), join(key), text_);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return node_.at(key);
  }

  void get(const std::string& key, double& out) {
    if (!take(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number()) fail(key, "expected a number");
    out = v.get<double>();
  }

  void get(const std::string& key, bool& out) {
    if (!take(key)) return;
    const json& v = node_.at(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    out = v.get<bool>();
  }

  void get(const std::string& key, std::string& out) {
    if (!take(key)) return;
    const json& v = node_.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    out = v.get<std::string>();
  }

  void get(const std::string& key, std::uint64_t& out) {
    if (!take(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number_unsigned()) fail(key, "expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  template <int N>
  void get(const std::string& key, Eigen::Matrix<double, N, 1>& out) {
    if (!take(key)) return;
    const json& v = node_.at(key);
    if (!v.is_array() || v.size() != static_cast<std::size_t>(N)) {
      fail(key, "expected an array of " + std::to_string(N) + " numbers");
    }
    for (int i = 0; i < N; ++i) {
      if (!v[static_cast<std::size_t>(i)].is_number()) fail(key, "array entries must be numbers");
      out(i) = v[static_cast<std::size_t>(i)].get<double>();
    }
  }

  /// number → s·I, [t, r] → diag(t,t,t,r,r,r), six numbers → diag.
  void get_gain(const std::string& key, Matrix6& out) {
    if (!take(key)) return;
    const json& v = node_.at(key);
    if (v.is_number()) {
      out = v.get<double>() * Matrix6::Identity();
      return;
    }
    if (v.is_array() && (v.size() == 2 || v.size() == 6) &&
        std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
      if (v.size() == 2) {
        out = GainSet::diagonal(v[0].get<double>(), v[1].get<double>());
      } else {
        Vector6 d;
        for (int i = 0; i < 6; ++i) d(i) = v[static_cast<std::size_t>(i)].get<double>();
        out = d.asDiagonal();
      }
      return;
    }
    fail(key, "expected a number, [translational, rotational] or six diagonal entries");
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) fail(it.key(), "unknown key");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    std::string where = key.empty() ? (path_.empty() ? "<root>" : path_) : join(key);
    const int line = key.empty() ? 0 : line_of(key);
    throw ConfigError("config error at '" + where + "'" +
                      (line > 0 ? " (line " + std::to_string(line) + ")" : "") + ": " +
                      message);
  }

 private:
  bool take(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  int line_of(const std::string& key) const {
    const auto pos = text_.find("\"" + key + "\"");
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n'));
  }

  const json& node_;
  std::string path_;
  const std::string& text_;
  std::set<std::string> seen_;
};

void read_thresholds(Section s, ChamberThresholds& t) {
  s.get("lower", t.lower);
  s.get("soft", t.soft);
  s.get("hard", t.hard);
  s.finish();
}

void read_tank(Section s, TankParams& t) {
  s.get("total_budget", t.total_budget);
  s.get("interactive_budget", t.interactive_budget);
  s.get("valve_drain_rate", t.valve_drain_rate);
  s.get("load_time", t.load_time);
  s.get("p_drain", t.p_drain);
  s.get("p_recover", t.p_recover);
  s.get("epsilon", t.epsilon);
  s.get("z_min", t.z_min);
  s.get("interactive_enabled", t.interactive_enabled);
  if (s.has("total_thresholds")) read_thresholds(s.child("total_thresholds"), t.total_thresholds);
  if (s.has("interactive_thresholds")) {
    read_thresholds(s.child("interactive_thresholds"), t.interactive_thresholds);
  }
  s.finish();
}

EnvironmentModel environment_preset(const std::string& name, const Section& s) {
  if (name == "table") return EnvironmentModel::table();
  if (name == "phantom") return EnvironmentModel::phantom();
  if (name == "arm") return EnvironmentModel::arm();
  s.fail("preset", "unknown environment preset '" + name + "' (table, phantom, arm)");
}

HumanSegment read_segment(Section s) {
  HumanSegment seg;
  std::string kind = "hold";
  s.get("kind", kind);
  try {
    seg.kind = human_action_from_string(kind);
  } catch (const ConfigError& e) {
    s.fail("kind", e.what());
  }
  s.get("t_start", seg.t_start);
  s.get("t_end", seg.t_end);
  s.get("direction", seg.direction);
  s.get("peak", seg.peak);
  s.get("displacement", seg.displacement);
  s.get("axes", seg.axes);
  s.get("absolute", seg.absolute);
  s.get("ramp", seg.ramp);
  s.get("hand_stiffness", seg.hand_stiffness);
  s.get("hand_damping", seg.hand_damping);
  s.get("max_force", seg.max_force);
  s.get("rise", seg.rise);
  s.get("value", seg.value);
  s.finish();
  return seg;
}

RmseMask mask_from_string(const std::string& name, const Section& s) {
  if (name == "chambers") return RmseMask::Chambers;
  if (name == "script") return RmseMask::Script;
  if (name == "none") return RmseMask::None;
  s.fail("rmse_mask", "expected chambers, script or none");
}

std::string to_string(RmseMask mask) {
  switch (mask) {
    case RmseMask::Chambers: return "chambers";
    case RmseMask::Script: return "script";
    case RmseMask::None: return "none";
  }
  return "chambers";
}

json vec_json(const auto& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json diag_json(const Matrix6& m) { return vec_json(Vector6(m.diagonal())); }

json thresholds_json(const ChamberThresholds& t) {
  return {{"lower", t.lower}, {"soft", t.soft}, {"hard", t.hard}};
}

json tank_json(const TankParams& t) {
  return {{"total_budget", t.total_budget},
          {"interactive_budget", t.interactive_budget},
          {"valve_drain_rate", t.valve_drain_rate},
          {"load_time", t.load_time},
          {"p_drain", t.p_drain},
          {"p_recover", t.p_recover},
          {"epsilon", t.epsilon},
          {"z_min", t.z_min},
          {"interactive_enabled", t.interactive_enabled},
          {"total_thresholds", thresholds_json(t.total_thresholds)},
          {"interactive_thresholds", thresholds_json(t.interactive_thresholds)}};
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  if (name == "exp1" || name == "exp2") return c;
  if (name != "exp3" && name != "exp4") {
    throw ConfigError("config error at 'preset': unknown preset '" + name +
                      "' (exp1, exp2, exp3, exp4)");
  }
  c.task = name == "exp3" ? Task::UltrasoundPhantom : Task::UltrasoundArm;
  c.environment = name == "exp3" ? EnvironmentModel::phantom() : EnvironmentModel::arm();
  c.reference = ultrasound_params();
  c.reference.surface_height = c.environment.surface_height;
  c.ific.force_tank.valve_drain_rate = 0.05;
  c.ific.force_tank.total_budget = 2.0;
  c.ific.gains.kd = 0.01 * Matrix6::Identity();
  c.ific.gains.stiffness = GainSet::diagonal(1500.0, 25.0);
  return c;
}

HumanScript human_script_from_json(const json& j) {
  static const std::string empty;
  if (!j.is_array()) throw ConfigError("config error at 'human': expected an array of segments");
  HumanScript script;
  for (std::size_t i = 0; i < j.size(); ++i) {
    script.segments.push_back(read_segment(Section(j[i], "human[" + std::to_string(i) + "]", empty)));
  }
  return script;
}

RunConfig parse_config_text(const std::string& text) {
  json root;
  const bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (blank) {
    root = json::object();
  } else {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      const auto upto = std::min<std::size_t>(e.byte, text.size());
      const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
      throw ConfigError("config parse error (line " + std::to_string(line) + "): " + e.what());
    }
  }

  Section s(root, "", text);
  std::string preset_name = "exp1";
  s.get("preset", preset_name);
  RunConfig run;
  run.scenario = preset(preset_name);
  ScenarioConfig& c = run.scenario;

  double schema = kConfigSchemaVersion;
  s.get("schema_version", schema);
  if (schema != kConfigSchemaVersion) s.fail("schema_version", "unsupported schema version");

  s.get("name", c.name);
  std::string task = to_string(c.task);
  s.get("task", task);
  try {
    c.task = task_from_string(task);
  } catch (const ConfigError& e) {
    s.fail("task", e.what());
  }
  s.get("duration", c.duration);
  s.get("dt", c.dt);
  s.get("seed", c.seed);
  s.get("force_noise", c.force_noise);
  std::string controller = to_string(c.controller);
  s.get("controller", controller);
  try {
    c.controller = controller_from_string(controller);
  } catch (const ConfigError& e) {
    s.fail("controller", e.what());
  }

  if (s.has("environment")) {
    Section e = s.child("environment");
    std::string env_preset;
    e.get("preset", env_preset);
    if (!env_preset.empty()) c.environment = environment_preset(env_preset, e);
    e.get("surface_height", c.environment.surface_height);
    e.get("stiffness", c.environment.stiffness);
    e.get("damping", c.environment.damping);
    e.get("viscous", c.environment.viscous);
    e.get("coulomb", c.environment.coulomb);
    e.get("smoothing_velocity", c.environment.smoothing_velocity);
    e.finish();
  }
  c.reference.surface_height = c.environment.surface_height;

  if (s.has("reference")) {
    Section r = s.child("reference");
    r.get("amplitude_x", c.reference.amplitude_x);
    r.get("amplitude_y", c.reference.amplitude_y);
    r.get("frequency", c.reference.frequency);
    r.get("phase_y", c.reference.phase_y);
    r.get("force_z", c.reference.force_z);
    Vector3 center = c.reference.center;
    r.get("center", center);
    c.reference.center = center;
    r.finish();
  }

  if (s.has("plant")) {
    Section p = s.child("plant");
    double mass = c.plant.inertia(0, 0);
    double rot = c.plant.inertia(3, 3);
    p.get("translational_mass", mass);
    p.get("rotational_inertia", rot);
    if (!(mass > 0.0) || !(rot > 0.0)) p.fail("", "masses must be > 0");
    c.plant = PlantModel::with_masses(mass, rot);
    p.finish();
  }

  if (s.has("gains")) {
    Section g = s.child("gains");
    g.get_gain("kp", c.ific.gains.kp);
    g.get_gain("ki", c.ific.gains.ki);
    g.get_gain("kd", c.ific.gains.kd);
    g.get_gain("stiffness", c.ific.gains.stiffness);
    g.get_gain("damping", c.ific.gains.damping);
    g.finish();
  }
  if (s.has("pid")) {
    Section p = s.child("pid");
    p.get("windup_limit", c.ific.pid.windup_limit);
    p.get("rate_cutoff_hz", c.ific.pid.rate_cutoff_hz);
    p.finish();
  }
  if (s.has("force_tank")) read_tank(s.child("force_tank"), c.ific.force_tank);
  if (s.has("impedance_tank")) read_tank(s.child("impedance_tank"), c.ific.impedance_tank);
  s.get("setpoint_relax_rate", c.ific.setpoint_relax_rate);
  s.get("pin_tanks", c.ific.pin_tanks);

  if (s.has("ufic")) {
    Section u = s.child("ufic");
    u.get("budget", c.ufic_budget);
    u.finish();
  }
  if (s.has("lpf")) {
    Section l = s.child("lpf");
    l.get("cutoff_hz", c.lpf.cutoff_hz);
    l.get("threshold", c.lpf.threshold);
    l.get("ramp_time", c.lpf.ramp_time);
    l.finish();
  }
  if (s.has("ds")) {
    Section d = s.child("ds");
    d.get("energy_threshold", c.ds.energy_threshold);
    d.get("energy_max", c.ds.energy_max);
    d.get("leak_time", c.ds.leak_time);
    d.get("admittance_mass", c.ds.admittance_mass);
    d.get("admittance_damping", c.ds.admittance_damping);
    d.finish();
  }

  if (s.has("human")) {
    const json& h = s.raw("human");
    if (!h.is_array()) s.fail("human", "expected an array of segments");
    c.human.segments.clear();
    for (std::size_t i = 0; i < h.size(); ++i) {
      c.human.segments.push_back(read_segment(Section(h[i], "human[" + std::to_string(i) + "]", text)));
    }
  }

  if (s.has("metrics")) {
    Section m = s.child("metrics");
    std::string mask = to_string(c.metrics.rmse_mask);
    m.get("rmse_mask", mask);
    c.metrics.rmse_mask = mask_from_string(mask, m);
    m.get("work_budget", c.metrics.work_budget);
    m.get("peak_window_start", c.metrics.peak_window_start);
    m.get("peak_window_end", c.metrics.peak_window_end);
    m.get("safety_bound", c.metrics.safety_bound);
    m.get("contact_loss_after", c.metrics.contact_loss_after);
    m.get("recontact_window", c.metrics.recontact_window);
    m.finish();
  }

  if (s.has("output")) {
    Section o = s.child("output");
    o.get("trace", run.trace_path);
    o.finish();
  }
  if (s.has("telemetry")) {
    Section t = s.child("telemetry");
    t.get("snapshot_hz", run.telemetry.snapshot_hz);
    t.get("realtime_factor", run.telemetry.realtime_factor);
    t.get("max_wrench", run.telemetry.max_wrench);
    if (!(run.telemetry.snapshot_hz > 0.0)) t.fail("snapshot_hz", "must be > 0");
    if (!(run.telemetry.realtime_factor > 0.0)) t.fail("realtime_factor", "must be > 0");
    if (!(run.telemetry.max_wrench > 0.0)) t.fail("max_wrench", "must be > 0");
    t.finish();
  }
  s.finish();
  c.validate();
  return run;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

json to_json(const HumanScript& script) {
  json segments = json::array();
  for (const HumanSegment& s : script.segments) {
    segments.push_back({{"kind", to_string(s.kind)},
                        {"t_start", s.t_start},
                        {"t_end", s.t_end},
                        {"direction", vec_json(s.direction)},
                        {"peak", s.peak},
                        {"displacement", vec_json(s.displacement)},
                        {"axes", vec_json(s.axes)},
                        {"absolute", s.absolute},
                        {"ramp", s.ramp},
                        {"hand_stiffness", s.hand_stiffness},
                        {"hand_damping", s.hand_damping},
                        {"max_force", s.max_force},
                        {"rise", s.rise},
                        {"value", vec_json(s.value)}});
  }
  return segments;
}

json to_json(const RunConfig& run) {
  const ScenarioConfig& c = run.scenario;
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["name"] = c.name;
  j["task"] = to_string(c.task);
  j["duration"] = c.duration;
  j["dt"] = c.dt;
  j["seed"] = c.seed;
  j["force_noise"] = c.force_noise;
  j["controller"] = to_string(c.controller);
  j["environment"] = {{"surface_height", c.environment.surface_height},
                      {"stiffness", c.environment.stiffness},
                      {"damping", c.environment.damping},
                      {"viscous", c.environment.viscous},
                      {"coulomb", c.environment.coulomb},
                      {"smoothing_velocity", c.environment.smoothing_velocity}};
  j["reference"] = {{"amplitude_x", c.reference.amplitude_x},
                    {"amplitude_y", c.reference.amplitude_y},
                    {"frequency", c.reference.frequency},
                    {"phase_y", c.reference.phase_y},
                    {"force_z", c.reference.force_z},
                    {"center", vec_json(c.reference.center)}};
  j["plant"] = {{"translational_mass", c.plant.inertia(0, 0)},
                {"rotational_inertia", c.plant.inertia(3, 3)}};
  const GainSet& g = c.ific.gains;
  j["gains"] = {{"kp", diag_json(g.kp)},
                {"ki", diag_json(g.ki)},
                {"kd", diag_json(g.kd)},
                {"stiffness", diag_json(g.stiffness)},
                {"damping", diag_json(g.damping)}};
  j["pid"] = {{"windup_limit", c.ific.pid.windup_limit},
              {"rate_cutoff_hz", c.ific.pid.rate_cutoff_hz}};
  j["force_tank"] = tank_json(c.ific.force_tank);
  j["impedance_tank"] = tank_json(c.ific.impedance_tank);
  j["setpoint_relax_rate"] = c.ific.setpoint_relax_rate;
  j["pin_tanks"] = c.ific.pin_tanks;
  j["ufic"] = {{"budget", c.ufic_budget}};
  j["lpf"] = {{"cutoff_hz", c.lpf.cutoff_hz},
              {"threshold", c.lpf.threshold},
              {"ramp_time", c.lpf.ramp_time}};
  j["ds"] = {{"energy_threshold", c.ds.energy_threshold},
             {"energy_max", c.ds.energy_max},
             {"leak_time", c.ds.leak_time},
             {"admittance_mass", c.ds.admittance_mass},
             {"admittance_damping", c.ds.admittance_damping}};
  j["human"] = to_json(c.human);
  j["metrics"] = {{"rmse_mask", to_string(c.metrics.rmse_mask)},
                  {"work_budget", c.metrics.work_budget},
                  {"peak_window_start", c.metrics.peak_window_start},
                  {"peak_window_end", c.metrics.peak_window_end},
                  {"safety_bound", c.metrics.safety_bound},
                  {"contact_loss_after", c.metrics.contact_loss_after},
                  {"recontact_window", c.metrics.recontact_window}};
  j["output"] = {{"trace", run.trace_path}};
  j["telemetry"] = {{"snapshot_hz", run.telemetry.snapshot_hz},
                    {"realtime_factor", run.telemetry.realtime_factor},
                    {"max_wrench", run.telemetry.max_wrench}};
  return j;
}

}  // namespace ific
