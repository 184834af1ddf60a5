#pragma once

/// @file ws_server.hpp
/// @brief Runs a GameServer behind a WebSocket listener.
///
/// One simulation thread owns the GameServer and advances it at a fixed
/// rate. Network I/O runs on a separate thread. The two sides talk only
/// through an ordered input queue and per-connection outbound queues of
/// encoded messages.

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "showdown/net/server.hpp"

namespace showdown::net {

struct WsOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port; see WsServer::port().
  std::uint16_t port = 8080;
  std::chrono::nanoseconds tick_period{16'666'667};
  /// Stop once the match has ended and the final messages are flushed.
  bool stop_when_finished = true;
};

/// Parses "host:port" or ":port" or "port".
WsOptions parse_bind(const std::string& bind);

class WsServer {
 public:
  /// Called on the simulation thread after every tick.
  using TickHook = std::function<void(const GameServer&, const TickResult&)>;

  WsServer(const ServerConfig& config, const WsOptions& options, TickHook hook = {});
  ~WsServer();
  WsServer(const WsServer&) = delete;
  WsServer& operator=(const WsServer&) = delete;

  /// Bound port, valid once the constructor returns.
  [[nodiscard]] std::uint16_t port() const noexcept;

  /// Serves until stop() or, if configured, the end of the match.
  void run();
  /// Safe from any thread.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace showdown::net
