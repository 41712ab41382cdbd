#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cogrip/service/protocol.hpp"

namespace cogrip::service {

using Clock = std::chrono::steady_clock;

// Named task sets, read from a gen-tasks directory or generated on first use.
class TaskProvider {
 public:
  explicit TaskProvider(std::uint64_t seed = kDefaultSeed,
                        std::optional<std::filesystem::path> dir = std::nullopt);

  // Throws ProtocolError(UnknownTask).
  const std::vector<Task>& set(const std::string& name);
  const Task& task(const TaskRef& ref);

 private:
  std::uint64_t seed_;
  std::optional<std::filesystem::path> dir_;
  std::optional<SymbolSplits> splits_;
  std::map<std::string, std::vector<Task>, std::less<>> sets_;
  std::mutex mutex_;
};

struct ServiceOptions {
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::filesystem::path> task_dir;
  // Sessions untouched for this long are dropped by reap().
  std::chrono::milliseconds idle_timeout{std::chrono::minutes(10)};
  // How long a session outlives the connection that owns it.
  std::chrono::milliseconds grace{std::chrono::seconds(30)};
};

struct Session {
  std::string id;
  SessionConfig config;
  Env env;
  std::size_t cursor = 0;  // next task of config.task_set
  long long steps = 0;     // accepted steps over the session's lifetime
  Clock::time_point last_active;
  std::optional<Clock::time_point> orphaned_at;
  std::mutex mutex;
};

// What a request produced: the reply, then (human mode) the stream events in
// the order they must be delivered.
struct Output {
  ReplyEnvelope reply;
  std::vector<ReplyEnvelope> events;
};

class Service {
 public:
  explicit Service(ServiceOptions options = {});

  // Never throws; failures become ErrorReply.
  Output handle(const RequestEnvelope& request);
  // Decodes, handles and encodes. Returns one JSON document per element.
  // `created` receives the id of a session opened by this line.
  std::vector<std::string> handle_line(std::string_view line,
                                       std::optional<std::string>* created = nullptr);

  // Stream ownership: when the owning connection goes away the session is
  // kept for the grace period, and any further request adopts it again.
  void release(const std::vector<std::string>& sessions);
  std::size_t reap(Clock::time_point now = Clock::now());

  std::size_t session_count() const;
  bool has_session(const std::string& id) const;
  TaskProvider& tasks() { return tasks_; }
  const ServiceOptions& options() const { return options_; }

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  Output dispatch(const Request& request);

  ServiceOptions options_;
  TaskProvider tasks_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
  std::uint64_t next_id_ = 1;
};

// Session ids created by a request, so a connection can track what it owns.
std::optional<std::string> created_session(const ReplyEnvelope& reply);

}  // namespace cogrip::service
