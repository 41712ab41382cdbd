#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "cogrip/service/service.hpp"

namespace cogrip::service {

inline constexpr const char* kBindAddressEnv = "COGRIP_BIND_ADDRESS";
inline constexpr const char* kDefaultBindAddress = "127.0.0.1";

// COGRIP_BIND_ADDRESS, or loopback when unset.
std::string bind_address_from_env();

struct ServerOptions {
  std::string bind_address = kDefaultBindAddress;
  std::uint16_t tcp_port = 0;                // 0 picks a free port
  std::optional<std::uint16_t> ws_port;      // stream endpoint, off when unset
  // A connection with no traffic for this long is closed. The WebSocket
  // endpoint pings at half this interval, so live browsers stay connected.
  std::chrono::milliseconds heartbeat{std::chrono::seconds(60)};
  std::chrono::milliseconds reap_interval{std::chrono::seconds(1)};
  unsigned threads = 0;  // 0: hardware concurrency
};

// Line-delimited JSON over TCP plus an optional WebSocket endpoint, both
// backed by one Service. Each connection handles its requests strictly one at
// a time; replies and events are written before the next request is read.
class Server {
 public:
  Server(Service& service, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts the worker threads. Throws Error when binding fails.
  void start();
  void stop();
  // Blocks until stop() is called from another thread or a signal.
  void wait();

  std::uint16_t tcp_port() const;
  std::optional<std::uint16_t> ws_port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cogrip::service
