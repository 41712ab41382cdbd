#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "cogrip/service/protocol.hpp"

namespace cogrip::service {

// Blocking client for the line-delimited TCP endpoint.
class Client {
 public:
  Client(const std::string& host, std::uint16_t port);
  ~Client();
  Client(Client&&) noexcept;
  Client& operator=(Client&&) noexcept;

  void send(const RequestEnvelope& request);
  void send_line(const std::string& line);
  ReplyEnvelope receive();
  std::string receive_line();

  // send() then receive(); ErrorReply becomes ProtocolError.
  ReplyEnvelope call(const Request& request);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::int64_t next_id_ = 1;
};

// One agent-mode session driven over a Client, mirroring Env.
class RemoteEnv {
 public:
  RemoteEnv(Client& client, const EnvConfig& config);
  ~RemoteEnv();

  Observation reset(const Task& task);
  Observation reset(const TaskRef& ref);
  StepReply step(Action action);
  void close();

  const std::string& session() const { return session_; }

 private:
  Client& client_;
  std::string session_;
  bool open_ = true;
};

// Rebuilds the in-process step result from a reply, for trajectory logs.
StepResult to_step_result(const StepReply& reply);

}  // namespace cogrip::service
