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

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "ific/config.hpp"
#include "ific/scenarios.hpp"

namespace ific {

inline constexpr int kProtocolVersion = 1;

class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Fixed-capacity FIFO shared between the physics and bridge contexts. A full queue drops
/// its oldest entry.
template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

  /// Returns false when an entry had to be dropped.
  bool push(T value) {
    std::lock_guard lock(mutex_);
    bool kept = true;
    if (items_.size() == capacity_) {
      items_.pop_front();
      kept = false;
    }
    items_.push_back(std::move(value));
    ready_.notify_one();
    return kept;
  }

  std::optional<T> try_pop() {
    std::lock_guard lock(mutex_);
    if (items_.empty()) return std::nullopt;
    T value = std::move(items_.front());
    items_.pop_front();
    return value;
  }

  template <typename Duration>
  std::optional<T> pop_for(Duration timeout) {
    std::unique_lock lock(mutex_);
    if (!ready_.wait_for(lock, timeout, [this] { return !items_.empty(); })) return std::nullopt;
    T value = std::move(items_.front());
    items_.pop_front();
    return value;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return items_.size();
  }

 private:
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<T> items_;
};

struct WrenchCommand {
  Wrench value = Wrench::Zero();
};
struct SetParamCommand {
  std::string key;
  double value = 0.0;
};
struct PauseCommand {};
struct ResumeCommand {};
struct ResetCommand {};
struct SelectControllerCommand {
  ControllerKind kind = ControllerKind::Ific;
};

using Command = std::variant<WrenchCommand, SetParamCommand, PauseCommand, ResumeCommand,
                             ResetCommand, SelectControllerCommand>;

/// Decodes one client message. Throws ProtocolError on anything malformed.
Command parse_command(const std::string& text);

nlohmann::json error_message(const std::string& what);

/// A simulation driven by live commands. Owns no threads and does no I/O.
class LiveSession {
 public:
  explicit LiveSession(RunConfig cfg);

  /// Applies one command. Returns a reply for the client, if any (errors, acknowledgements).
  std::optional<nlohmann::json> apply(const Command& command);

  /// One physics period unless paused. Returns whether a step was taken.
  bool advance();

  nlohmann::json snapshot() const;

  /// Live wrench input since the last reset as wrench segments on top of the configured
  /// script. Replaying it from t = 0 reproduces the session.
  HumanScript recorded_script() const;

  bool paused() const { return paused_; }
  const Simulation& simulation() const { return sim_; }
  const RunConfig& config() const { return cfg_; }

 private:
  void close_segment();

  RunConfig cfg_;
  Simulation sim_;
  bool paused_ = false;
  std::vector<HumanSegment> recorded_;
  std::optional<HumanSegment> open_;
};

}  // namespace ific
