#pragma once

#include "holme/protocol.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace holme {

/// Framed TCP endpoint: one thread per connection, replies written in request
/// order on the connection that asked.
class TcpServer {
 public:
  explicit TcpServer(const MessageHandler& handler) : handler_(handler) {}
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  /// Binds 0.0.0.0:`port` (0 picks a free port). Throws BindFailed.
  void bind(std::uint16_t port);
  std::uint16_t port() const { return port_; }

  /// Accept loop; returns after stop().
  void run();
  /// Thread-safe; closes the listener and every open connection.
  void stop();

 private:
  void serve_connection(int fd);

  const MessageHandler& handler_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex mutex_;
  std::vector<int> open_fds_;
  std::vector<std::thread> workers_;
};

/// HTTP listener that upgrades GET /ws to a WebSocket carrying the same JSON
/// envelopes as text messages. Other GET paths are served from `static_root`
/// when one is configured, 404 otherwise.
class WebSocketServer {
 public:
  WebSocketServer(const MessageHandler& handler,
                  std::optional<std::filesystem::path> static_root = std::nullopt);
  ~WebSocketServer();
  WebSocketServer(const WebSocketServer&) = delete;
  WebSocketServer& operator=(const WebSocketServer&) = delete;

  void bind(std::uint16_t port);
  std::uint16_t port() const;
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace holme
