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

#include "serve.hpp"

#include <chrono>
#include <deque>
#include <string>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

#include "ific/live.hpp"

namespace ific {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

constexpr std::size_t kOutboxCapacity = 64;
constexpr std::size_t kCommandCapacity = 256;
constexpr std::size_t kClientBacklog = 64;

class Client : public std::enable_shared_from_this<Client> {
 public:
  Client(tcp::socket socket, BoundedQueue<Command>& commands)
      : ws_(std::move(socket)), commands_(commands) {}

  void start() {
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) {
        spdlog::warn("websocket handshake failed: {}", ec.message());
        return;
      }
      self->open_ = true;
      spdlog::info("client connected");
      self->read();
    });
  }

  bool open() const { return open_; }

  void send(std::string text) {
    if (!open_) return;
    if (pending_.size() >= kClientBacklog) {
      pending_.erase(writing_ ? pending_.begin() + 1 : pending_.begin());
    }
    pending_.push_back(std::move(text));
    if (!writing_) write_next();
  }

  void close() {
    if (!open_) return;
    open_ = false;
    commands_.push(WrenchCommand{});
    ws_.async_close(websocket::close_code::normal,
                    [self = shared_from_this()](beast::error_code) {});
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        if (self->open_) {
          self->open_ = false;
          self->commands_.push(WrenchCommand{});
          spdlog::info("client disconnected: {}", ec.message());
        }
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      try {
        self->commands_.push(parse_command(text));
      } catch (const ProtocolError& e) {
        spdlog::debug("rejected message: {}", e.what());
        self->send(error_message(e.what()).dump());
      }
      self->read();
    });
  }

  void write_next() {
    if (pending_.empty() || !open_) {
      writing_ = false;
      return;
    }
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(pending_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      self->pending_.pop_front();
                      if (ec) {
                        self->pending_.clear();
                        self->writing_ = false;
                        return;
                      }
                      self->write_next();
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  BoundedQueue<Command>& commands_;
  beast::flat_buffer buffer_;
  std::deque<std::string> pending_;
  bool writing_ = false;
  bool open_ = false;
};

}  // namespace

struct Server::Impl {
  Impl(RunConfig config, std::uint16_t port)
      : cfg(std::move(config)),
        acceptor(io, tcp::endpoint(net::ip::make_address("0.0.0.0"), port)),
        pump(io),
        commands(kCommandCapacity),
        outbox(kOutboxCapacity) {}

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      if (client) client->close();
      client = std::make_shared<Client>(std::move(socket), commands);
      client->start();
      accept();
    });
  }

  void schedule_pump() {
    pump.expires_after(std::chrono::milliseconds(5));
    pump.async_wait([this](beast::error_code ec) {
      if (ec) return;
      while (auto message = outbox.try_pop()) {
        if (client && client->open()) client->send(std::move(*message));
      }
      schedule_pump();
    });
  }

  void physics() {
    LiveSession session(cfg);
    const double dt = cfg.scenario.dt;
    const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(dt / cfg.telemetry.realtime_factor));
    const auto snapshot_period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / cfg.telemetry.snapshot_hz));
    const std::size_t stride = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(1.0 / (cfg.telemetry.snapshot_hz * dt))));
    auto next = std::chrono::steady_clock::now();
    auto next_idle_snapshot = next;
    outbox.push(session.snapshot().dump());

    while (!stopping.load()) {
      while (auto command = commands.try_pop()) {
        if (auto reply = session.apply(*command)) outbox.push(reply->dump());
        if (std::holds_alternative<ResetCommand>(*command) ||
            std::holds_alternative<SelectControllerCommand>(*command)) {
          outbox.push(session.snapshot().dump());
        }
      }
      const auto now = std::chrono::steady_clock::now();
      if (session.paused()) {
        if (now >= next_idle_snapshot) {
          outbox.push(session.snapshot().dump());
          next_idle_snapshot = now + snapshot_period;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
        next = std::chrono::steady_clock::now();
        continue;
      }
      try {
        session.advance();
      } catch (const SimulationDiverged& e) {
        spdlog::error("simulation diverged: {}", e.what());
        outbox.push(error_message(std::string("simulation diverged: ") + e.what()).dump());
        session.apply(PauseCommand{});
        continue;
      }
      if (session.simulation().steps_taken() % stride == 0) {
        outbox.push(session.snapshot().dump());
      }
      next += period;
      if (next < now - std::chrono::milliseconds(100)) next = now;
      std::this_thread::sleep_until(next);
    }
  }

  RunConfig cfg;
  net::io_context io;
  tcp::acceptor acceptor;
  net::steady_timer pump;
  BoundedQueue<Command> commands;
  BoundedQueue<std::string> outbox;
  std::shared_ptr<Client> client;
  std::atomic<bool> stopping{false};
};

Server::Server(RunConfig cfg, std::uint16_t port)
    : impl_(std::make_unique<Impl>(std::move(cfg), port)) {}

Server::~Server() { stop(); }

std::uint16_t Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run(bool handle_signals) {
  Impl& s = *impl_;
  net::signal_set signals(s.io);
  if (handle_signals) {
    signals.add(SIGINT);
    signals.add(SIGTERM);
    signals.async_wait([this](beast::error_code ec, int) {
      if (!ec) stop();
    });
  }
  s.accept();
  s.schedule_pump();
  std::thread physics([&s] { s.physics(); });
  spdlog::info("serving on port {}", port());
  s.io.run();
  s.stopping.store(true);
  physics.join();
}

void Server::stop() {
  impl_->stopping.store(true);
  impl_->io.stop();
}

}  // namespace ific
