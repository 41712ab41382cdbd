#include "cogrip/service/service.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

namespace cogrip::service {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

ErrorReply error(ErrorCode code, std::string message,
                 std::optional<std::string> session = std::nullopt) {
  return {code, std::move(message), std::move(session)};
}

std::optional<std::string> session_of(const Request& request) {
  return std::visit(Overloaded{
                        [](const Hello&) -> std::optional<std::string> { return std::nullopt; },
                        [](const Ping&) -> std::optional<std::string> { return std::nullopt; },
                        [](const NewSession&) -> std::optional<std::string> { return std::nullopt; },
                        [](const auto& m) -> std::optional<std::string> { return m.session; },
                    },
                    request);
}

EnvConfig env_config(const SessionConfig& config) { return {config.order, config.feedback}; }

}  // namespace

TaskProvider::TaskProvider(std::uint64_t seed, std::optional<std::filesystem::path> dir)
    : seed_(seed), dir_(std::move(dir)) {}

const std::vector<Task>& TaskProvider::set(const std::string& name) {
  std::lock_guard lock(mutex_);
  if (auto it = sets_.find(name); it != sets_.end()) return it->second;

  // A task directory may hold extra sets (gen-tasks --map-size writes custom.jsonl).
  const auto names = task_set_names();
  const bool standard = std::find(names.begin(), names.end(), name) != names.end();
  const bool plain = !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_';
  });
  if (!standard && !(dir_ && plain)) {
    throw ProtocolError(ErrorCode::UnknownTask, "unknown task set: " + name);
  }
  std::vector<Task> tasks;
  if (dir_) {
    std::ifstream in(*dir_ / (name + ".jsonl"));
    if (!in) throw ProtocolError(ErrorCode::UnknownTask, "no task file for set " + name);
    tasks = read_tasks(in);
  } else {
    if (!splits_) splits_ = make_splits(seed_);
    tasks = build_task_set(*splits_, name, seed_).tasks;
  }
  return sets_.emplace(name, std::move(tasks)).first->second;
}

const Task& TaskProvider::task(const TaskRef& ref) {
  const auto& tasks = set(ref.set);
  if (ref.index >= tasks.size()) {
    throw ProtocolError(ErrorCode::UnknownTask, "task index " + std::to_string(ref.index) +
                                                    " out of range for " + ref.set);
  }
  return tasks[ref.index];
}

// ---------------------------------------------------------------------------

Service::Service(ServiceOptions options)
    : options_(std::move(options)), tasks_(options_.seed, options_.task_dir) {}

std::shared_ptr<Session> Service::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t Service::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

bool Service::has_session(const std::string& id) const { return find(id) != nullptr; }

Output Service::handle(const RequestEnvelope& request) {
  Output out;
  try {
    out = dispatch(request.body);
  } catch (const ProtocolError& e) {
    out = {{std::nullopt, error(e.code(), e.what(), session_of(request.body))}, {}};
  } catch (const EpisodeDone& e) {
    out = {{std::nullopt, error(ErrorCode::EpisodeDone, e.what(), session_of(request.body))}, {}};
  } catch (const InvalidTask& e) {
    out = {{std::nullopt, error(ErrorCode::InvalidTask, e.what(), session_of(request.body))}, {}};
  } catch (const std::exception& e) {
    out = {{std::nullopt, error(ErrorCode::Internal, e.what(), session_of(request.body))}, {}};
  }
  out.reply.id = request.id;
  return out;
}

Output Service::dispatch(const Request& request) {
  if (std::holds_alternative<Hello>(request)) return {{std::nullopt, HelloReply{}}, {}};
  if (std::holds_alternative<Ping>(request)) return {{std::nullopt, Pong{}}, {}};

  if (const auto* m = std::get_if<NewSession>(&request)) {
    tasks_.set(m->config.task_set);  // reject unknown sets up front
    auto session = std::make_shared<Session>();
    session->config = m->config;
    session->last_active = Clock::now();
    {
      std::lock_guard lock(mutex_);
      session->id = "s" + std::to_string(next_id_++);
      sessions_.emplace(session->id, session);
    }
    return {{std::nullopt, SessionCreated{session->id, session->config}}, {}};
  }

  const std::string id = *session_of(request);
  auto session = find(id);
  if (!session) throw ProtocolError(ErrorCode::UnknownSession, "unknown session: " + id);

  std::lock_guard lock(session->mutex);
  session->last_active = Clock::now();
  session->orphaned_at.reset();
  const bool human = session->config.mode == SessionMode::Human;
  Env& env = session->env;

  if (std::holds_alternative<Close>(request)) {
    std::lock_guard map_lock(mutex_);
    sessions_.erase(id);
    return {{std::nullopt, Closed{id}}, {}};
  }

  if (const auto* m = std::get_if<Reset>(&request)) {
    const Task task = std::visit(
        Overloaded{
            [&](const std::monostate&) {
              const auto& tasks = tasks_.set(session->config.task_set);
              return tasks[session->cursor++ % tasks.size()];
            },
            [](const Task& t) { return t; },
            [&](const TaskRef& ref) { return tasks_.task(ref); },
        },
        m->task);
    Observation obs = env.reset(task, env_config(session->config));
    Output out{{std::nullopt, ResetReply{id, task.id, obs}}, {}};
    if (human) {
      out.events.push_back({std::nullopt, FrameEvent{id, 0, env.gripper().position(), env.frame()}});
      const Utterance& re = env.teacher().initial_re;
      out.events.push_back({std::nullopt, UtteranceEvent{id, 0, re.kind, re.text, re.tokens}});
    }
    return out;
  }

  if (!env.has_episode()) {
    if (std::holds_alternative<Step>(request) || std::holds_alternative<RenderRequest>(request)) {
      throw ProtocolError(ErrorCode::NoEpisode, "session " + id + " has no episode; send reset");
    }
  }

  if (const auto* m = std::get_if<Step>(&request)) {
    if (env.done()) {
      throw ProtocolError(ErrorCode::EpisodeDone, "episode is over; send reset");
    }
    StepResult r = env.step(m->action);
    ++session->steps;
    StepReply reply;
    reply.session = id;
    reply.reward = r.reward;
    reply.done = r.done;
    reply.outcome = r.outcome;
    reply.gripper = r.gripper;
    reply.over_piece = r.over_piece;
    if (r.feedback) reply.feedback_kind = r.feedback->kind;
    const int t = r.observation.t;
    reply.observation = std::move(r.observation);

    Output out{{std::nullopt, std::move(reply)}, {}};
    if (human) {
      out.events.push_back({std::nullopt, FrameEvent{id, t, r.gripper, env.frame()}});
      if (r.feedback) {
        out.events.push_back({std::nullopt, UtteranceEvent{id, t, r.feedback->kind, r.feedback->text,
                                                           r.feedback->tokens}});
      }
      if (r.outcome) out.events.push_back({std::nullopt, OutcomeEvent{id, *r.outcome}});
    }
    return out;
  }

  // RenderRequest
  Image image = human ? env.frame() : extract_view(env.frame(), env.gripper().position());
  return {{std::nullopt, RenderReply{id, std::move(image)}}, {}};
}

std::vector<std::string> Service::handle_line(std::string_view line,
                                              std::optional<std::string>* created) {
  RequestEnvelope request;
  try {
    request = parse_request(line);
  } catch (const ProtocolError& e) {
    ReplyEnvelope reply{std::nullopt, error(e.code(), e.what())};
    // Echo the id when the envelope itself is readable.
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_object() && j.contains("id") && j["id"].is_number_integer()) {
      reply.id = j["id"].get<std::int64_t>();
    }
    if (j.is_object() && j.contains("session") && j["session"].is_string()) {
      std::get<ErrorReply>(reply.body).session = j["session"].get<std::string>();
    }
    return {to_json(reply).dump()};
  }
  Output out = handle(request);
  if (created) *created = created_session(out.reply);
  std::vector<std::string> lines;
  lines.reserve(1 + out.events.size());
  lines.push_back(to_json(out.reply).dump());
  for (const auto& e : out.events) lines.push_back(to_json(e).dump());
  return lines;
}

void Service::release(const std::vector<std::string>& sessions) {
  const auto now = Clock::now();
  for (const auto& id : sessions) {
    if (auto s = find(id)) {
      std::lock_guard lock(s->mutex);
      s->orphaned_at = now;
    }
  }
}

std::size_t Service::reap(Clock::time_point now) {
  std::vector<std::shared_ptr<Session>> snapshot;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [id, s] : sessions_) snapshot.push_back(s);
  }
  std::vector<std::string> dead;
  for (const auto& s : snapshot) {
    std::lock_guard lock(s->mutex);
    const bool idle = now - s->last_active >= options_.idle_timeout;
    const bool orphaned = s->orphaned_at && now - *s->orphaned_at >= options_.grace;
    if (idle || orphaned) dead.push_back(s->id);
  }
  std::lock_guard lock(mutex_);
  for (const auto& id : dead) sessions_.erase(id);
  return dead.size();
}

std::optional<std::string> created_session(const ReplyEnvelope& reply) {
  if (const auto* m = std::get_if<SessionCreated>(&reply.body)) return m->session;
  return std::nullopt;
}

}  // namespace cogrip::service
