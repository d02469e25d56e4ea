#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

#include "eiha/live.hpp"

namespace eiha {

struct ServeOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8765;  // 0 picks a free port
  EihaConfig base;
  Condition condition = Condition::stm4;
  std::uint64_t seed = 0;
  /// Zero means one tick every 1/resolution seconds.
  std::chrono::microseconds tick_period{0};
  /// When set, the episode's event log is written here on disconnect, reset
  /// and shutdown.
  std::string log_path;
  /// Stop cleanly on SIGINT and SIGTERM.
  bool handle_signals = false;
};

/// Websocket bridge between one human-partner client and a LiveSession.
/// One client at a time; a second connection is refused until the first
/// leaves. Everything runs on the thread that calls run().
class LiveServer {
 public:
  explicit LiveServer(ServeOptions options);
  ~LiveServer();
  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  /// Binds and listens; returns the bound port. Throws on failure.
  std::uint16_t listen();

  /// Serves until stop(). Calls listen() first if needed.
  void run();

  /// Thread-safe.
  void stop();

  LiveSession& session();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace eiha
