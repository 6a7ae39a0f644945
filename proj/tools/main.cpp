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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ific/config.hpp"
#include "ific/passivity.hpp"
#include "ific/report.hpp"
#include "serve.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kDiverged = 2, kAuditViolation = 3 };

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("ific");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("IFIC_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

ific::RunConfig load(const std::string& path) {
  return path.empty() ? ific::parse_config_text("") : ific::parse_config(path);
}

std::vector<ific::ControllerKind> parse_controllers(const std::string& list) {
  std::vector<ific::ControllerKind> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(ific::controller_from_string(item));
  }
  if (out.empty()) throw ific::ConfigError("no controllers given");
  return out;
}

int cmd_run(const std::string& config_path, const std::string& controller,
            const std::string& out_path) {
  ific::RunConfig cfg = load(config_path);
  const ific::ControllerKind kind =
      controller.empty() ? cfg.scenario.controller : ific::controller_from_string(controller);
  const std::string path =
      !out_path.empty() ? out_path : (!cfg.trace_path.empty() ? cfg.trace_path : "trace.csv");
  spdlog::info("running {} with {} for {} s", cfg.scenario.name, ific::to_string(kind),
               cfg.scenario.duration);
  const ific::ControllerRun run = ific::run_controller(cfg, kind);
  ific::write_trace(run.trace, path);
  nlohmann::json summary = {{"scenario", cfg.scenario.name},
                            {"controller", ific::to_string(kind)},
                            {"trace", path},
                            {"records", run.trace.records.size()},
                            {"wall_seconds", run.wall_seconds},
                            {"metrics", ific::to_json(run.metrics)},
                            {"audit_passed", run.audit.passed()}};
  std::cout << summary.dump(2) << '\n';
  if (run.trace.aborted) {
    spdlog::error("run aborted: {}", *run.trace.aborted);
    return kDiverged;
  }
  return kOk;
}

int cmd_compare(const std::string& config_path, const std::string& controllers,
                const std::string& out_path) {
  const ific::RunConfig cfg = load(config_path);
  const auto runs = ific::run_comparison(cfg, parse_controllers(controllers));
  const nlohmann::json report = ific::comparison_report(cfg, runs);
  if (out_path.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) throw ific::ConfigError("cannot write '" + out_path + "'");
    out << report.dump(2) << '\n';
  }
  for (const auto& run : runs) {
    if (run.trace.aborted) {
      spdlog::error("{} aborted: {}", ific::to_string(run.controller), *run.trace.aborted);
      return kDiverged;
    }
  }
  return kOk;
}

int cmd_audit(const std::string& trace_path, bool strict) {
  const ific::Trace trace = ific::read_trace(trace_path);
  const ific::AuditReport report = ific::passivity_audit(trace.records, trace.dt);
  std::cout << ific::to_json(report).dump(2) << '\n';
  if (!report.passed()) {
    spdlog::warn("passivity audit found {} storage, {} prefactor and {} balance violations",
                 report.storage_violations, report.prefactor_violations,
                 report.balance_violations);
    if (strict) return kAuditViolation;
  }
  return kOk;
}

int cmd_serve(const std::string& config_path, int port) {
  if (port < 0 || port > 65535) throw ific::ConfigError("port must be in 0..65535");
  ific::Server server(load(config_path), static_cast<std::uint16_t>(port));
  std::cout << "listening on ws://0.0.0.0:" << server.port() << std::endl;
  server.run();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Interactive force-impedance control simulator"};
  app.require_subcommand(1);

  std::string config_path, controller, out_path, controllers = "ific,ufic,lpf,ds", trace_path;
  bool strict = false;
  int port = 8765;

  auto* run = app.add_subcommand("run", "Run one scenario and write its trace");
  run->add_option("--config", config_path, "Scenario config (JSON)");
  run->add_option("--controller", controller, "ific, ufic, lpf or ds");
  run->add_option("--out", out_path, "Trace CSV path");

  auto* compare = app.add_subcommand("compare", "Run several controllers on one scenario");
  compare->add_option("--config", config_path, "Scenario config (JSON)");
  compare->add_option("--controllers", controllers, "Comma-separated controller list");
  compare->add_option("--out", out_path, "Report JSON path");

  auto* audit = app.add_subcommand("audit", "Passivity audit of a recorded trace");
  audit->add_option("trace", trace_path, "Trace CSV")->required();
  audit->add_flag("--strict", strict, "Exit with status 3 on any violation");

  auto* serve = app.add_subcommand("serve", "Realtime simulation behind a websocket");
  serve->add_option("--config", config_path, "Scenario config (JSON)");
  serve->add_option("--port", port, "TCP port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(config_path, controller, out_path);
    if (*compare) return cmd_compare(config_path, controllers, out_path);
    if (*audit) return cmd_audit(trace_path, strict);
    if (*serve) return cmd_serve(config_path, port);
  } catch (const ific::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ific::SimulationDiverged& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDiverged;
  } catch (const ific::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
