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
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ific/baselines.hpp"
#include "ific/controller.hpp"
#include "ific/plant.hpp"
#include "ific/trace.hpp"

namespace ific {

enum class Task { Wiping, UltrasoundPhantom, UltrasoundArm };
enum class ControllerKind { Ific, Ufic, Lpf, Ds };

std::string to_string(Task task);
std::string to_string(ControllerKind kind);
Task task_from_string(const std::string& name);
ControllerKind controller_from_string(const std::string& name);

/// Planar sinusoid over a horizontal surface with a constant normal force.
struct ReferenceParams {
  double amplitude_x = 0.1;    ///< [m]
  double amplitude_y = 0.1;    ///< [m]
  double frequency = 0.2;      ///< [Hz]
  double phase_y = 1.5707963267948966;  ///< [rad]
  double force_z = -10.0;      ///< f_dz [N]
  double surface_height = 0.0; ///< x_d,z [m]
  Vector3 center = Vector3::Zero();  ///< xy offset of the pattern; z ignored
};

Reference task_reference(const ReferenceParams& params, double t);
Reference wiping_reference(double t, const ReferenceParams& params = {});
/// Slow scan line along x with the −3 N probe force.
ReferenceParams ultrasound_params();
Reference ultrasound_reference(double t, const ReferenceParams& params = ultrasound_params());

enum class RmseMask { Chambers, Script, None };

struct MetricOptions {
  RmseMask rmse_mask = RmseMask::Chambers;
  double work_budget = 10.0;           ///< e_h stops accumulating here [J]
  double peak_window_start = 0.0;      ///< window for peak contact force [s]
  double peak_window_end = -1.0;       ///< negative: end of trace
  double safety_bound = 40.0;          ///< [N]
  double contact_loss_after = 0.0;     ///< first contact loss at or after this time [s]
  double recontact_window = 0.25;      ///< impact window after recontact [s]
};

struct ScenarioConfig {
  std::string name = "wiping";
  Task task = Task::Wiping;
  double duration = 150.0;
  double dt = 1e-3;
  ReferenceParams reference;
  EnvironmentModel environment = EnvironmentModel::table();
  PlantModel plant;
  HumanScript human;
  ControllerKind controller = ControllerKind::Ific;
  IficParams ific;
  double ufic_budget = 0.8;
  LpfParams lpf;
  DsParams ds;
  MetricOptions metrics;
  double force_noise = 0.0;  ///< std of additive Gaussian noise on measured F_ext [N]
  std::uint64_t seed = 1;

  void validate() const;
  /// On the reference at t = 0, resting at the contact equilibrium for f_dz.
  PlantState initial_state() const;
};

std::unique_ptr<Controller> make_controller(const ScenarioConfig& cfg, ControllerKind kind);

/// Fixed-step loop: reference → human → environment → controller → record → plant.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig cfg);

  /// Advances one control period and returns the record of the cycle just executed.
  const TraceRecord& step();
  void reset();
  bool finished() const { return step_ >= total_steps_; }
  std::size_t steps_taken() const { return step_; }
  double time() const { return state_.time; }
  const PlantState& state() const { return state_; }
  const TraceRecord& last() const { return last_; }
  const ScenarioConfig& config() const { return cfg_; }
  Controller& controller() { return *controller_; }

  /// Added to the scripted human wrench until replaced; zero clears it.
  void set_live_wrench(const Wrench& wrench) { live_wrench_ = wrench; }
  const Wrench& live_wrench() const { return live_wrench_; }
  void select_controller(ControllerKind kind);
  bool set_parameter(const std::string& key, double value);

 private:
  ScenarioConfig cfg_;
  std::unique_ptr<Controller> controller_;
  HumanDriver human_;
  PlantState state_;
  TraceRecord last_;
  Wrench live_wrench_ = Wrench::Zero();
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
  std::size_t step_ = 0;
  std::size_t total_steps_ = 0;
};

/// Runs the full scenario. A divergence ends the run; the records so far are kept and
/// `aborted` carries the reason.
Trace run_scenario(const ScenarioConfig& cfg);

struct MetricsReport {
  double rmse = 0.0;            ///< [N], masked
  double rmse_unmasked = 0.0;   ///< [N]
  std::size_t rmse_samples = 0;
  std::optional<double> interaction_efficiency;  ///< e_h [m/J]
  double human_work = 0.0;      ///< W_h [J]
  double guided_distance = 0.0; ///< x_g [m]
  bool work_budget_reached = false;
  double peak_contact_force = 0.0;  ///< [N] within the peak window
  std::optional<double> recovery_time_force;      ///< [s]
  std::optional<double> recovery_time_impedance;  ///< [s]
  std::optional<double> peak_velocity_after_loss; ///< [m/s]
  std::optional<double> recontact_peak_force;     ///< [N]
};

/// RMSE of the force-direction error ‖F'_d + F_ext‖ over masked records. Throws if the
/// mask is empty.
double force_rmse(const std::vector<TraceRecord>& records, RmseMask mask);

struct InteractionEfficiency {
  double efficiency = 0.0;
  double work = 0.0;
  double distance = 0.0;
  bool budget_reached = false;
};

/// e_h = x_g / W_h over guidance-flagged records, stopping once W_h reaches `work_budget`.
/// Throws if no positive work was done.
InteractionEfficiency interaction_efficiency(const std::vector<TraceRecord>& records, double dt,
                                             double work_budget);

enum class TankSide { Force, Impedance };

/// Time from the last record with positive interaction power on `side` to the first later
/// record whose interactive damping factor is back at 1.
std::optional<double> recovery_time(const std::vector<TraceRecord>& records, TankSide side);

double peak_contact_force(const std::vector<TraceRecord>& records, double t_start,
                          double t_end);

/// Peak linear speed from the first contact loss at or after `t_from` until contact returns.
std::optional<double> peak_velocity_after_contact_loss(const std::vector<TraceRecord>& records,
                                                       double t_from);

/// Peak normal force within `window` seconds of the first recontact that follows the first
/// contact loss at or after `t_from`.
std::optional<double> recontact_peak_force(const std::vector<TraceRecord>& records,
                                           double t_from, double window);

MetricsReport compute_metrics(const Trace& trace, const MetricOptions& options);

}  // namespace ific
