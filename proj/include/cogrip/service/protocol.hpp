#pragma once

// Wire messages exchanged with trainers and the browser client. Every message
// is one JSON object with a "type" field; on the TCP endpoint each message is
// a single line, on the WebSocket endpoint each message is one text frame.
// See docs/protocol.md for the field-by-field schema.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cogrip/env.hpp"
#include "cogrip/errors.hpp"
#include "json.hpp"

namespace cogrip::service {

inline constexpr std::string_view kProtocolVersion = "cogrip/1";

enum class ErrorCode : std::uint8_t {
  Malformed,
  UnknownType,
  UnknownSession,
  EpisodeDone,
  NoEpisode,
  InvalidTask,
  UnknownTask,
  Internal,
};

std::string_view to_string(ErrorCode code);
std::optional<ErrorCode> parse_error_code(std::string_view text);

// Raised while decoding; carries the code that goes back to the peer.
class ProtocolError : public Error {
 public:
  ProtocolError(ErrorCode code, const std::string& what) : Error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class SessionMode : std::uint8_t { Agent, Human };

std::string_view to_string(SessionMode mode);

struct SessionConfig {
  PreferenceOrder order;
  bool feedback = true;
  SessionMode mode = SessionMode::Agent;
  std::string task_set = "test20";  // source for resets without a task
  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

struct TaskRef {
  std::string set;
  std::size_t index = 0;
  friend bool operator==(const TaskRef&, const TaskRef&) = default;
};

// ---------------------------------------------------------------------------
// Requests
// ---------------------------------------------------------------------------

struct Hello {
  friend bool operator==(const Hello&, const Hello&) = default;
};
struct Ping {
  friend bool operator==(const Ping&, const Ping&) = default;
};
struct NewSession {
  SessionConfig config;
  friend bool operator==(const NewSession&, const NewSession&) = default;
};
struct Reset {
  std::string session;
  // Nothing: next task of the session's task set.
  std::variant<std::monostate, Task, TaskRef> task;
  friend bool operator==(const Reset&, const Reset&) = default;
};
struct Step {
  std::string session;
  Action action = Action::Wait;
  friend bool operator==(const Step&, const Step&) = default;
};
struct RenderRequest {
  std::string session;
  friend bool operator==(const RenderRequest&, const RenderRequest&) = default;
};
struct Close {
  std::string session;
  friend bool operator==(const Close&, const Close&) = default;
};

using Request = std::variant<Hello, Ping, NewSession, Reset, Step, RenderRequest, Close>;

struct RequestEnvelope {
  std::optional<std::int64_t> id;  // echoed in the reply
  Request body;
  friend bool operator==(const RequestEnvelope&, const RequestEnvelope&) = default;
};

// ---------------------------------------------------------------------------
// Replies and stream events
// ---------------------------------------------------------------------------

struct HelloReply {
  std::string protocol{kProtocolVersion};
  friend bool operator==(const HelloReply&, const HelloReply&) = default;
};
struct Pong {
  friend bool operator==(const Pong&, const Pong&) = default;
};
struct SessionCreated {
  std::string session;
  SessionConfig config;
  friend bool operator==(const SessionCreated&, const SessionCreated&) = default;
};
struct ResetReply {
  std::string session;
  std::string task_id;
  Observation observation;
  friend bool operator==(const ResetReply&, const ResetReply&) = default;
};
struct StepReply {
  std::string session;
  Observation observation;
  double reward = 0.0;
  bool done = false;
  std::optional<EpisodeOutcome> outcome;
  // Debug info, not part of the agent's observation.
  Coord gripper;
  std::optional<PieceId> over_piece;
  std::optional<UtteranceKind> feedback_kind;
  friend bool operator==(const StepReply&, const StepReply&) = default;
};
struct RenderReply {
  std::string session;
  Image image;  // full board in human mode, the 11x11 view in agent mode
  friend bool operator==(const RenderReply&, const RenderReply&) = default;
};
struct Closed {
  std::string session;
  friend bool operator==(const Closed&, const Closed&) = default;
};
struct ErrorReply {
  ErrorCode code = ErrorCode::Internal;
  std::string message;
  std::optional<std::string> session;
  friend bool operator==(const ErrorReply&, const ErrorReply&) = default;
};

// Pushed on the stream endpoint for human-mode sessions.
struct FrameEvent {
  std::string session;
  int t = 0;
  Coord gripper;
  Image board;
  friend bool operator==(const FrameEvent&, const FrameEvent&) = default;
};
struct UtteranceEvent {
  std::string session;
  int t = 0;
  UtteranceKind kind = UtteranceKind::InitialRe;
  std::string text;
  TokenSeq tokens{};
  friend bool operator==(const UtteranceEvent&, const UtteranceEvent&) = default;
};
struct OutcomeEvent {
  std::string session;
  EpisodeOutcome outcome;
  friend bool operator==(const OutcomeEvent&, const OutcomeEvent&) = default;
};

using Reply = std::variant<HelloReply, Pong, SessionCreated, ResetReply, StepReply,
                           RenderReply, Closed, ErrorReply, FrameEvent, UtteranceEvent,
                           OutcomeEvent>;

struct ReplyEnvelope {
  std::optional<std::int64_t> id;
  Reply body;
  friend bool operator==(const ReplyEnvelope&, const ReplyEnvelope&) = default;
};

// ---------------------------------------------------------------------------
// Codec
// ---------------------------------------------------------------------------

nlohmann::json image_to_json(const Image& image);  // rows of [r,g,b]
Image image_from_json(const nlohmann::json& rows);

nlohmann::json to_json(const Observation& obs);
Observation observation_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RequestEnvelope& request);
// Throws ProtocolError (Malformed or UnknownType).
RequestEnvelope request_from_json(const nlohmann::json& j);
RequestEnvelope parse_request(std::string_view line);

nlohmann::json to_json(const ReplyEnvelope& reply);
ReplyEnvelope reply_from_json(const nlohmann::json& j);
ReplyEnvelope parse_reply(std::string_view line);

std::string_view type_name(const Request& request);
std::string_view type_name(const Reply& reply);

}  // namespace cogrip::service
