#include "cogrip/service/protocol.hpp"

#include <array>

namespace cogrip::service {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 8> kErrorNames = {
    "MALFORMED",   "UNKNOWN_TYPE", "UNKNOWN_SESSION", "EPISODE_DONE",
    "NO_EPISODE",  "INVALID_TASK", "UNKNOWN_TASK",    "INTERNAL"};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void malformed(const std::string& what) {
  throw ProtocolError(ErrorCode::Malformed, what);
}

json actions_json() {
  json a = json::array();
  for (Action action : kAllActions) a.push_back(to_string(action));
  return a;
}

json tokens_json(const TokenSeq& tokens) { return json(tokens); }

TokenSeq tokens_from_json(const json& j) {
  TokenSeq out{};
  if (!j.is_array() || j.size() != out.size()) malformed("token sequence must have 11 ids");
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = j[i].get<TokenId>();
  return out;
}

json coord_json(Coord c) { return json::array({c.x, c.y}); }
Coord coord_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) malformed("coordinate must be [x, y]");
  return {j[0].get<int>(), j[1].get<int>()};
}

json config_json(const SessionConfig& c) {
  return {{"order", c.order.code()},
          {"feedback", c.feedback},
          {"mode", to_string(c.mode)},
          {"task_set", c.task_set}};
}

SessionConfig config_from_json(const json& j) {
  SessionConfig c;
  if (j.is_null()) return c;
  if (j.contains("order")) {
    const auto order = PreferenceOrder::parse(j.at("order").get<std::string>());
    if (!order) malformed("bad preference order");
    c.order = *order;
  }
  c.feedback = j.value("feedback", true);
  const std::string mode = j.value("mode", std::string("agent"));
  if (mode == "agent") {
    c.mode = SessionMode::Agent;
  } else if (mode == "human") {
    c.mode = SessionMode::Human;
  } else {
    malformed("bad session mode: " + mode);
  }
  c.task_set = j.value("task_set", c.task_set);
  return c;
}

json outcome_json(const EpisodeOutcome& o) {
  return {{"status", to_string(o.status)},
          {"steps", o.steps},
          {"reward", o.reward},
          {"gripped", o.gripped ? json(*o.gripped) : json(nullptr)}};
}

EpisodeOutcome outcome_from_json(const json& j) {
  EpisodeOutcome o;
  const auto status = parse_status(j.at("status").get<std::string>());
  if (!status) malformed("bad episode status");
  o.status = *status;
  o.steps = j.at("steps").get<int>();
  o.reward = j.at("reward").get<double>();
  if (!j.at("gripped").is_null()) o.gripped = j.at("gripped").get<PieceId>();
  return o;
}

std::optional<UtteranceKind> utterance_kind_from(std::string_view s) {
  for (auto k : {UtteranceKind::InitialRe, UtteranceKind::DirectionFeedback,
                 UtteranceKind::PieceFeedback, UtteranceKind::RepeatedRe}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::string session_of(const json& j) {
  if (!j.contains("session") || !j.at("session").is_string()) malformed("missing session id");
  return j.at("session").get<std::string>();
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const ProtocolError&) {
    throw;
  } catch (const json::exception& e) {
    malformed(e.what());
  } catch (const Error& e) {
    malformed(e.what());
  }
}

}  // namespace

std::string_view to_string(ErrorCode code) { return kErrorNames[static_cast<int>(code)]; }

std::optional<ErrorCode> parse_error_code(std::string_view text) {
  for (std::size_t i = 0; i < kErrorNames.size(); ++i) {
    if (kErrorNames[i] == text) return static_cast<ErrorCode>(i);
  }
  return std::nullopt;
}

std::string_view to_string(SessionMode mode) {
  return mode == SessionMode::Agent ? "agent" : "human";
}

json image_to_json(const Image& image) {
  json rows = json::array();
  for (int y = 0; y < image.height(); ++y) {
    json row = json::array();
    for (int x = 0; x < image.width(); ++x) {
      const Rgb c = image.at(x, y);
      row.push_back({c.r, c.g, c.b});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Image image_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) malformed("image must be rows of pixels");
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows[0].size());
  Image img(w, h);
  for (int y = 0; y < h; ++y) {
    if (rows[y].size() != static_cast<std::size_t>(w)) malformed("ragged image rows");
    for (int x = 0; x < w; ++x) {
      const json& px = rows[y][x];
      if (!px.is_array() || px.size() != 3) malformed("pixel must be [r, g, b]");
      img.set(x, y, {px[0].get<std::uint8_t>(), px[1].get<std::uint8_t>(), px[2].get<std::uint8_t>()});
    }
  }
  return img;
}

json to_json(const Observation& obs) {
  return {{"view", image_to_json(obs.view)},
          {"gripper", {obs.gripper.first, obs.gripper.second}},
          {"re", {{"text", obs.re_text}, {"tokens", tokens_json(obs.re_tokens)}}},
          {"fb", {{"text", obs.fb_text}, {"tokens", tokens_json(obs.fb_tokens)}}},
          {"t", obs.t}};
}

Observation observation_from_json(const json& j) {
  return guarded([&] {
    Observation obs;
    obs.view = image_from_json(j.at("view"));
    obs.gripper = {j.at("gripper").at(0).get<double>(), j.at("gripper").at(1).get<double>()};
    obs.re_text = j.at("re").at("text").get<std::string>();
    obs.re_tokens = tokens_from_json(j.at("re").at("tokens"));
    obs.fb_text = j.at("fb").at("text").get<std::string>();
    obs.fb_tokens = tokens_from_json(j.at("fb").at("tokens"));
    obs.t = j.at("t").get<int>();
    return obs;
  });
}

// ---------------------------------------------------------------------------

std::string_view type_name(const Request& request) {
  return std::visit(Overloaded{
                        [](const Hello&) { return std::string_view("hello"); },
                        [](const Ping&) { return std::string_view("ping"); },
                        [](const NewSession&) { return std::string_view("new_session"); },
                        [](const Reset&) { return std::string_view("reset"); },
                        [](const Step&) { return std::string_view("step"); },
                        [](const RenderRequest&) { return std::string_view("render_request"); },
                        [](const Close&) { return std::string_view("close"); },
                    },
                    request);
}

json to_json(const RequestEnvelope& request) {
  json j = std::visit(
      Overloaded{
          [](const Hello&) { return json::object(); },
          [](const Ping&) { return json::object(); },
          [](const NewSession& m) { return json{{"config", config_json(m.config)}}; },
          [](const Reset& m) {
            json out{{"session", m.session}};
            if (const auto* task = std::get_if<Task>(&m.task)) out["task"] = cogrip::to_json(*task);
            if (const auto* ref = std::get_if<TaskRef>(&m.task)) {
              out["task_ref"] = {{"set", ref->set}, {"index", ref->index}};
            }
            return out;
          },
          [](const Step& m) { return json{{"session", m.session}, {"action", to_string(m.action)}}; },
          [](const RenderRequest& m) { return json{{"session", m.session}}; },
          [](const Close& m) { return json{{"session", m.session}}; },
      },
      request.body);
  j["type"] = type_name(request.body);
  if (request.id) j["id"] = *request.id;
  return j;
}

RequestEnvelope request_from_json(const json& j) {
  return guarded([&] {
    if (!j.is_object()) malformed("message must be a JSON object");
    if (!j.contains("type") || !j.at("type").is_string()) malformed("missing message type");
    RequestEnvelope env;
    if (j.contains("id") && !j.at("id").is_null()) env.id = j.at("id").get<std::int64_t>();
    const std::string type = j.at("type").get<std::string>();
    if (type == "hello") {
      env.body = Hello{};
    } else if (type == "ping") {
      env.body = Ping{};
    } else if (type == "new_session") {
      env.body = NewSession{config_from_json(j.value("config", json()))};
    } else if (type == "reset") {
      Reset r;
      r.session = session_of(j);
      if (j.contains("task") && j.contains("task_ref")) malformed("reset takes task or task_ref, not both");
      if (j.contains("task")) r.task = task_from_json(j.at("task"));
      if (j.contains("task_ref")) {
        r.task = TaskRef{j.at("task_ref").at("set").get<std::string>(),
                         j.at("task_ref").at("index").get<std::size_t>()};
      }
      env.body = std::move(r);
    } else if (type == "step") {
      const auto action = parse_action(j.at("action").get<std::string>());
      if (!action) malformed("unknown action");
      env.body = Step{session_of(j), *action};
    } else if (type == "render_request") {
      env.body = RenderRequest{session_of(j)};
    } else if (type == "close") {
      env.body = Close{session_of(j)};
    } else {
      throw ProtocolError(ErrorCode::UnknownType, "unknown message type: " + type);
    }
    return env;
  });
}

RequestEnvelope parse_request(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    malformed(e.what());
  }
  return request_from_json(j);
}

// ---------------------------------------------------------------------------

std::string_view type_name(const Reply& reply) {
  return std::visit(Overloaded{
                        [](const HelloReply&) { return std::string_view("hello"); },
                        [](const Pong&) { return std::string_view("pong"); },
                        [](const SessionCreated&) { return std::string_view("session"); },
                        [](const ResetReply&) { return std::string_view("observation"); },
                        [](const StepReply&) { return std::string_view("step_result"); },
                        [](const RenderReply&) { return std::string_view("render"); },
                        [](const Closed&) { return std::string_view("closed"); },
                        [](const ErrorReply&) { return std::string_view("error"); },
                        [](const FrameEvent&) { return std::string_view("frame"); },
                        [](const UtteranceEvent&) { return std::string_view("utterance"); },
                        [](const OutcomeEvent&) { return std::string_view("outcome"); },
                    },
                    reply);
}

json to_json(const ReplyEnvelope& reply) {
  json j = std::visit(
      Overloaded{
          [](const HelloReply& m) { return json{{"protocol", m.protocol}, {"actions", actions_json()}}; },
          [](const Pong&) { return json::object(); },
          [](const SessionCreated& m) {
            return json{{"session", m.session}, {"config", config_json(m.config)}, {"actions", actions_json()}};
          },
          [](const ResetReply& m) {
            return json{{"session", m.session}, {"task_id", m.task_id}, {"obs", to_json(m.observation)}};
          },
          [](const StepReply& m) {
            return json{{"session", m.session},
                        {"obs", to_json(m.observation)},
                        {"reward", m.reward},
                        {"done", m.done},
                        {"outcome", m.outcome ? outcome_json(*m.outcome) : json(nullptr)},
                        {"info",
                         {{"gripper", coord_json(m.gripper)},
                          {"over_piece", m.over_piece ? json(*m.over_piece) : json(nullptr)},
                          {"feedback_kind", m.feedback_kind ? json(to_string(*m.feedback_kind)) : json(nullptr)}}}};
          },
          [](const RenderReply& m) {
            return json{{"session", m.session},
                        {"width", m.image.width()},
                        {"height", m.image.height()},
                        {"image", image_to_json(m.image)}};
          },
          [](const Closed& m) { return json{{"session", m.session}}; },
          [](const ErrorReply& m) {
            return json{{"code", to_string(m.code)},
                        {"message", m.message},
                        {"session", m.session ? json(*m.session) : json(nullptr)}};
          },
          [](const FrameEvent& m) {
            return json{{"session", m.session},
                        {"t", m.t},
                        {"gripper", coord_json(m.gripper)},
                        {"board", image_to_json(m.board)}};
          },
          [](const UtteranceEvent& m) {
            return json{{"session", m.session},
                        {"t", m.t},
                        {"kind", to_string(m.kind)},
                        {"text", m.text},
                        {"tokens", tokens_json(m.tokens)}};
          },
          [](const OutcomeEvent& m) { return json{{"session", m.session}, {"outcome", outcome_json(m.outcome)}}; },
      },
      reply.body);
  j["type"] = type_name(reply.body);
  if (reply.id) j["id"] = *reply.id;
  return j;
}

ReplyEnvelope reply_from_json(const json& j) {
  return guarded([&] {
    if (!j.is_object() || !j.contains("type")) malformed("reply must be an object with a type");
    ReplyEnvelope env;
    if (j.contains("id") && !j.at("id").is_null()) env.id = j.at("id").get<std::int64_t>();
    const std::string type = j.at("type").get<std::string>();
    if (type == "hello") {
      env.body = HelloReply{j.at("protocol").get<std::string>()};
    } else if (type == "pong") {
      env.body = Pong{};
    } else if (type == "session") {
      env.body = SessionCreated{j.at("session").get<std::string>(), config_from_json(j.at("config"))};
    } else if (type == "observation") {
      env.body = ResetReply{j.at("session").get<std::string>(), j.at("task_id").get<std::string>(),
                            observation_from_json(j.at("obs"))};
    } else if (type == "step_result") {
      StepReply m;
      m.session = j.at("session").get<std::string>();
      m.observation = observation_from_json(j.at("obs"));
      m.reward = j.at("reward").get<double>();
      m.done = j.at("done").get<bool>();
      if (!j.at("outcome").is_null()) m.outcome = outcome_from_json(j.at("outcome"));
      const json& info = j.at("info");
      m.gripper = coord_from_json(info.at("gripper"));
      if (!info.at("over_piece").is_null()) m.over_piece = info.at("over_piece").get<PieceId>();
      if (!info.at("feedback_kind").is_null()) {
        m.feedback_kind = utterance_kind_from(info.at("feedback_kind").get<std::string>());
        if (!m.feedback_kind) malformed("bad feedback kind");
      }
      env.body = std::move(m);
    } else if (type == "render") {
      env.body = RenderReply{j.at("session").get<std::string>(), image_from_json(j.at("image"))};
    } else if (type == "closed") {
      env.body = Closed{j.at("session").get<std::string>()};
    } else if (type == "error") {
      const auto code = parse_error_code(j.at("code").get<std::string>());
      if (!code) malformed("bad error code");
      ErrorReply m{*code, j.at("message").get<std::string>(), std::nullopt};
      if (!j.at("session").is_null()) m.session = j.at("session").get<std::string>();
      env.body = std::move(m);
    } else if (type == "frame") {
      env.body = FrameEvent{j.at("session").get<std::string>(), j.at("t").get<int>(),
                            coord_from_json(j.at("gripper")), image_from_json(j.at("board"))};
    } else if (type == "utterance") {
      const auto kind = utterance_kind_from(j.at("kind").get<std::string>());
      if (!kind) malformed("bad utterance kind");
      env.body = UtteranceEvent{j.at("session").get<std::string>(), j.at("t").get<int>(), *kind,
                                j.at("text").get<std::string>(), tokens_from_json(j.at("tokens"))};
    } else if (type == "outcome") {
      env.body = OutcomeEvent{j.at("session").get<std::string>(), outcome_from_json(j.at("outcome"))};
    } else {
      throw ProtocolError(ErrorCode::UnknownType, "unknown reply type: " + type);
    }
    return env;
  });
}

ReplyEnvelope parse_reply(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    malformed(e.what());
  }
  return reply_from_json(j);
}

}  // namespace cogrip::service
