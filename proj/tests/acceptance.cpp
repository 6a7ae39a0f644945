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

// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ific/config.hpp"
#include "ific/passivity.hpp"
#include "ific/report.hpp"
#include "support.hpp"

namespace {

using namespace ific;
using Clock = std::chrono::steady_clock;

const std::vector<ControllerKind> kAll = {ControllerKind::Ific, ControllerKind::Ufic,
                                          ControllerKind::Lpf, ControllerKind::Ds};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

RunConfig scenario(const std::string& name) {
  return parse_config(std::string(IFIC_SCENARIO_DIR) + "/" + name + ".json");
}

struct RandomState {
  Reference reference;
  WorldGains gains;
  DirectionalBasis basis;
  ForcePidResult pid;
  Wrench external;
  Twist velocity;
  Twist reference_velocity;
};

RandomState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> gain(0.5, 5.0);
  RandomState s;
  s.reference.frame = test::random_rotation(rng);
  s.reference.force_pattern = test::random_pattern(rng);
  const Vector6 raw = test::random_vector(rng, 20.0);
  for (int i = 0; i < 6; ++i) {
    s.reference.frame_wrench[i] = s.reference.force_pattern[i] ? raw[i] : 0.0;
  }
  GainSet g;
  g.kp = gain(rng) * Matrix6::Identity();
  s.gains = rotate_gains(g, s.reference.frame);
  s.basis = build_directional_basis(s.reference.frame, s.reference.force_pattern);
  ForcePidState pid;
  pid.integral = test::random_vector(rng, 2.0);
  pid.prev_error = test::random_vector(rng, 5.0);
  pid.primed = true;
  s.external = test::random_vector(rng, 30.0);
  s.velocity = test::random_vector(rng, 0.5);
  s.reference_velocity = test::random_vector(rng, 0.5);
  s.pid = force_pid(pid, s.reference, s.external, s.gains, {}, 1e-3);
  return s;
}

class Acceptance {
 public:
  int run() {
    check("1", "power balance identity", [&] { return balance(); });
    check("2", "passivity audit on shipped scenarios", [&] { return passivity(); });
    check("3", "sub-port decomposition and cancellation", [&] { return ports(); });
    check("4", "damping law", [&] { return damping(); });
    check("5", "tank time constants", [&] { return time_constants(); });
    check("6", "wiping force tracking", [&] { return tracking(); });
    check("7a", "lift-release recontact ordering", [&] { return recontact(); });
    check("7b", "guidance efficiency ordering", [&] { return guidance(); });
    check("7c", "phantom safety bound", [&] { return phantom(); });
    check("7d", "arm-rise velocity ordering", [&] { return arm(); });
    check("8", "closed-loop fidelity with pinned tanks", [&] { return fidelity(); });
    check("9", "determinism", [&] { return determinism(); });
    std::printf("%d of %d criteria passed\n", passed_, total_);
    return passed_ == total_ ? 0 : 1;
  }

 private:
  template <typename F>
  void check(const char* id, const char* title, F&& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    ++total_;
    if (o.pass) ++passed_;
    std::printf("%s %-3s %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
  }

  const ControllerRun& wiping() {
    if (!wiping_) wiping_ = run_controller(scenario("exp1_wiping"), ControllerKind::Ific);
    return *wiping_;
  }

  const std::vector<ControllerRun>& compared(const std::string& name) {
    auto it = comparisons_.find(name);
    if (it == comparisons_.end()) {
      it = comparisons_.emplace(name, run_comparison(scenario(name), kAll)).first;
    }
    return it->second;
  }

  Outcome balance() {
    const auto start = Clock::now();
    std::mt19937_64 rng(101);
    double worst_random = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const RandomState s = random_state(rng);
      const ForcePorts p = split_force_ports(s.pid, s.external, s.basis, s.gains);
      TraceRecord r;
      r.twist = s.velocity;
      r.xd_dot = s.reference_velocity;
      r.f_ext = s.external;
      r.f_f = s.pid.output;
      r.port_c = p.interaction_constrained;
      r.port_r = p.regulation;
      r.port_u = p.interaction_unconstrained;
      r.port_du = p.desired_unconstrained;
      worst_random = std::max(worst_random, port_power_balance(r).relative());
    }
    const ControllerRun& run = wiping();
    double worst_run = 0.0;
    for (const TraceRecord& r : run.trace.records) {
      worst_run = std::max(worst_run, port_power_balance(r).relative());
    }
    const double elapsed = seconds_since(start);
    const bool complete = !run.trace.aborted && run.trace.records.size() ==
        static_cast<std::size_t>(std::llround(150.0 / run.trace.dt));
    return {worst_random <= 1e-9 && worst_run <= 1e-9 && complete && elapsed < 10.0,
            fmt("random max %.2e, wiping max %.2e over %zu cycles, %.2f s", worst_random,
                worst_run, run.trace.records.size(), elapsed)};
  }

  Outcome passivity() {
    bool ok = true;
    std::string detail;
    for (const char* name :
         {"exp1_wiping", "exp2_guidance", "exp2_lift_release", "exp3_phantom", "exp4_arm"}) {
      const RunConfig cfg = scenario(name);
      const ControllerRun run = std::string(name) == "exp1_wiping"
                                    ? wiping()
                                    : compared(name).front();
      const AuditReport& a = run.audit;
      const std::size_t violations =
          a.storage_violations + a.prefactor_violations + a.balance_violations;
      ok = ok && violations == 0 && !run.trace.aborted && cfg.scenario.duration <= 150.0 &&
           run.wall_seconds < 60.0;
      detail += fmt("%s %zu violations %.2f s; ", name, violations, run.wall_seconds);
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
  }

  Outcome ports() {
    std::mt19937_64 rng(202);
    double worst_sum = 0.0;
    double worst_kernel = 0.0;
    double worst_cancel = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const RandomState s = random_state(rng);
      const ForcePorts p = split_force_ports(s.pid, s.external, s.basis, s.gains);
      worst_sum = std::max(worst_sum, (p.sum() - s.pid.output).norm() /
                                          std::max(1.0, s.pid.output.norm()));
      worst_kernel =
          std::max(worst_kernel, (s.basis.kernel * (s.pid.desired + s.external)).norm() /
                                     std::max(1.0, s.external.norm()));
      const double cancel = s.velocity.dot(p.interaction_unconstrained) +
                            s.velocity.dot(p.desired_unconstrained);
      worst_cancel = std::max(worst_cancel, std::abs(cancel) /
                                                std::max(1.0, s.velocity.norm() * s.external.norm()));
    }
    return {worst_sum <= 1e-9 && worst_kernel <= 1e-9 && worst_cancel <= 1e-9,
            fmt("sum %.2e, kernel %.2e, cancellation %.2e", worst_sum, worst_kernel,
                worst_cancel)};
  }

  Outcome damping() {
    const TankParams p;
    const double eps = p.epsilon;
    bool ok = true;
    double worst_jump = 0.0;
    for (Chamber c : {Chamber::Total, Chamber::Interactive}) {
      const double lower = c == Chamber::Total ? p.total_lower() : p.interactive_lower();
      const double soft = c == Chamber::Total ? p.total_soft() : p.interactive_soft();
      const double hard = c == Chamber::Total ? p.total_hard() : p.interactive_hard();
      const double budget = c == Chamber::Total ? p.total_budget : p.interactive_budget;
      for (bool drain : {true, false}) {
        ok = ok && chamber_damping(lower + soft - 1e-9, p, c, drain) == 1.0 / eps;
        ok = ok && chamber_damping(lower, p, c, drain) == 1.0 / eps;
        ok = ok && chamber_damping(lower + hard, p, c, drain) == 1.0;
        ok = ok && chamber_damping(budget, p, c, drain) == 1.0;
        for (double edge : {lower + soft, lower + hard}) {
          const double jump = std::abs(1.0 / chamber_damping(edge + 1e-12, p, c, drain) -
                                       1.0 / chamber_damping(edge - 1e-12, p, c, drain));
          worst_jump = std::max(worst_jump, jump);
        }
        double previous = chamber_damping(0.0, p, c, drain);
        for (int i = 1; i <= 20000; ++i) {
          const double d = chamber_damping(budget * i / 20000.0, p, c, drain);
          ok = ok && d <= previous && d >= 1.0 && d <= 1.0 / eps;
          previous = d;
        }
      }
    }
    const double midpoint = chamber_damping(
        p.interactive_lower() + 0.5 * (p.interactive_soft() + p.interactive_hard()), p,
        Chamber::Interactive, true);
    const double oracle = 1.0 / (std::cos(std::numbers::pi / 4.0) + 1e-4);
    ok = ok && worst_jump <= 2.0 * eps && std::abs(midpoint - oracle) <= 1e-12;
    return {ok, fmt("midpoint %.6f (closed form %.6f), max breakpoint jump %.1e", midpoint,
                    oracle, worst_jump)};
  }

  Outcome time_constants() {
    const TankParams p;
    const double dt = 1e-3;
    TankState tank = TankState::full(p);
    int drain_steps = 0;
    while (tank.interactive_energy > 0.0 && drain_steps < 10000) {
      tank = tank_step(tank, p, 0.0, 0.5, dt).next;
      ++drain_steps;
    }
    const double drain = drain_steps * dt;
    const double drain_oracle = p.interactive_budget / (0.5 - p.valve_drain_rate);
    int recover_steps = 0;
    while (current_damping(tank, p, 0.0).interactive != 1.0 && recover_steps < 100000) {
      tank = tank_step(tank, p, 0.0, 0.0, dt).next;
      ++recover_steps;
    }
    const double recovery = recover_steps * dt;
    return {std::abs(drain - 0.213) <= 5e-3 && std::abs(drain - drain_oracle) <= 5e-3 &&
                std::abs(recovery - p.load_time) <= 2e-3,
            fmt("drain %.3f s (closed form %.4f s), recovery %.3f s", drain, drain_oracle,
                recovery)};
  }

  Outcome tracking() {
    const MetricsReport& m = wiping().metrics;
    return {m.rmse <= 1.5, fmt("masked RMSE %.4f N over %zu samples (unmasked %.3f N)", m.rmse,
                               m.rmse_samples, m.rmse_unmasked)};
  }

  template <typename Get>
  static std::string listing(const std::vector<ControllerRun>& runs, Get get) {
    std::string out;
    for (const ControllerRun& r : runs) {
      const std::optional<double> v = get(r);
      out += to_string(r.controller) + (v ? fmt(" %.4g", *v) : std::string(" n/a")) + ", ";
    }
    out.resize(out.size() - 2);
    return out;
  }

  /// IFIC strictly below (or above) every baseline, all values defined.
  template <typename Get>
  static bool ific_strictly_best(const std::vector<ControllerRun>& runs, Get get, bool lowest) {
    const std::optional<double> mine = get(runs.front());
    if (!mine) return false;
    for (std::size_t i = 1; i < runs.size(); ++i) {
      const std::optional<double> other = get(runs[i]);
      if (!other) return false;
      if (lowest ? !(*mine < *other) : !(*mine > *other)) return false;
    }
    return true;
  }

  Outcome recontact() {
    const auto& runs = compared("exp2_lift_release");
    const auto get = [](const ControllerRun& r) { return r.metrics.recontact_peak_force; };
    return {ific_strictly_best(runs, get, true), "recontact peak [N]: " + listing(runs, get)};
  }

  Outcome guidance() {
    const auto& runs = compared("exp2_guidance");
    const auto get = [](const ControllerRun& r) { return r.metrics.interaction_efficiency; };
    return {ific_strictly_best(runs, get, false), "e_h [m/J]: " + listing(runs, get)};
  }

  Outcome phantom() {
    const RunConfig cfg = scenario("exp3_phantom");
    const double bound = cfg.scenario.metrics.safety_bound;
    const auto& runs = compared("exp3_phantom");
    const auto get = [](const ControllerRun& r) -> std::optional<double> {
      return r.metrics.peak_contact_force;
    };
    bool baseline_exceeds = false;
    for (std::size_t i = 1; i < runs.size(); ++i) {
      baseline_exceeds = baseline_exceeds || runs[i].metrics.peak_contact_force > bound;
    }
    return {runs.front().metrics.peak_contact_force < bound && baseline_exceeds,
            fmt("bound %.1f N; peak [N]: ", bound) + listing(runs, get)};
  }

  Outcome arm() {
    const auto& runs = compared("exp4_arm");
    const auto get = [](const ControllerRun& r) { return r.metrics.peak_velocity_after_loss; };
    const std::optional<double> ific = get(runs[0]);
    const std::optional<double> ufic = get(runs[1]);
    return {ific && ufic && *ific < *ufic,
            "peak speed after contact loss [m/s]: " + listing(runs, get)};
  }

  Outcome fidelity() {
    RunConfig cfg;
    cfg.scenario.duration = 10.0;
    cfg.scenario.ific.pin_tanks = true;
    const ScenarioConfig& s = cfg.scenario;
    const Trace trace = run_scenario(s);
    const Matrix6& inertia = s.plant.inertia;
    const Matrix6 damping = s.ific.gains.damping + s.plant.coriolis;
    const Matrix6& stiffness = s.ific.gains.stiffness;
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
      const TraceRecord& r = trace.records[k];
      const Twist& next = trace.records[k + 1].twist;
      const Vector6 xdd = task_reference(s.reference, r.t).acceleration;
      const Vector6 residual = inertia * ((next - r.twist) / s.dt - xdd) +
                               damping * (r.twist - r.xd_dot) + stiffness * (r.pose - r.xd) -
                               r.f_f - r.f_ext;
      worst = std::max(worst, residual.cwiseAbs().maxCoeff());
    }
    return {!trace.aborted && trace.records.size() == 10000 && worst <= 1e-6,
            fmt("max component residual %.2e N over %zu cycles", worst, trace.records.size())};
  }

  Outcome determinism() {
    const ControllerRun again = run_controller(scenario("exp1_wiping"), ControllerKind::Ific);
    const std::uint64_t a = trace_hash(wiping().trace.records);
    const std::uint64_t b = trace_hash(again.trace.records);
    return {a == b, fmt("%016llx vs %016llx", static_cast<unsigned long long>(a),
                        static_cast<unsigned long long>(b))};
  }

  std::optional<ControllerRun> wiping_;
  std::map<std::string, std::vector<ControllerRun>> comparisons_;
  int passed_ = 0;
  int total_ = 0;
};

}  // namespace

int main() { return Acceptance().run(); }
