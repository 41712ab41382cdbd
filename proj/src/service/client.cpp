#include "cogrip/service/client.hpp"

#include <boost/asio.hpp>

namespace cogrip::service {

namespace asio = boost::asio;
using tcp = asio::ip::tcp;

struct Client::Impl {
  asio::io_context ioc;
  tcp::socket socket{ioc};
  asio::streambuf buffer;
};

Client::Client(const std::string& host, std::uint16_t port) : impl_(std::make_unique<Impl>()) {
  boost::system::error_code ec;
  tcp::resolver resolver(impl_->ioc);
  const auto endpoints = resolver.resolve(host, std::to_string(port), ec);
  if (!ec) asio::connect(impl_->socket, endpoints, ec);
  if (ec) throw Error("cannot connect to " + host + ":" + std::to_string(port) + ": " + ec.message());
  impl_->socket.set_option(tcp::no_delay(true));
}

Client::~Client() = default;
Client::Client(Client&&) noexcept = default;
Client& Client::operator=(Client&&) noexcept = default;

void Client::send_line(const std::string& line) {
  boost::system::error_code ec;
  std::string framed = line;
  framed += '\n';
  asio::write(impl_->socket, asio::buffer(framed), ec);
  if (ec) throw Error("send failed: " + ec.message());
}

void Client::send(const RequestEnvelope& request) { send_line(to_json(request).dump()); }

std::string Client::receive_line() {
  boost::system::error_code ec;
  const std::size_t n = asio::read_until(impl_->socket, impl_->buffer, '\n', ec);
  if (ec) throw Error("receive failed: " + ec.message());
  std::string line(asio::buffers_begin(impl_->buffer.data()),
                   asio::buffers_begin(impl_->buffer.data()) + static_cast<std::ptrdiff_t>(n - 1));
  impl_->buffer.consume(n);
  return line;
}

ReplyEnvelope Client::receive() { return parse_reply(receive_line()); }

ReplyEnvelope Client::call(const Request& request) {
  const std::int64_t id = next_id_++;
  send({id, request});
  ReplyEnvelope reply = receive();
  if (const auto* err = std::get_if<ErrorReply>(&reply.body)) {
    throw ProtocolError(err->code, err->message);
  }
  if (reply.id != id) throw Error("reply id does not match request");
  return reply;
}

// ---------------------------------------------------------------------------

RemoteEnv::RemoteEnv(Client& client, const EnvConfig& config) : client_(client) {
  SessionConfig sc;
  sc.order = config.order;
  sc.feedback = config.feedback_enabled;
  session_ = std::get<SessionCreated>(client_.call(NewSession{sc}).body).session;
}

RemoteEnv::~RemoteEnv() {
  try {
    close();
  } catch (const std::exception&) {
  }
}

Observation RemoteEnv::reset(const Task& task) {
  return std::get<ResetReply>(client_.call(Reset{session_, task}).body).observation;
}

Observation RemoteEnv::reset(const TaskRef& ref) {
  return std::get<ResetReply>(client_.call(Reset{session_, ref}).body).observation;
}

StepReply RemoteEnv::step(Action action) {
  return std::get<StepReply>(client_.call(Step{session_, action}).body);
}

void RemoteEnv::close() {
  if (!open_) return;
  open_ = false;
  client_.call(Close{session_});
}

StepResult to_step_result(const StepReply& reply) {
  StepResult r;
  r.observation = reply.observation;
  r.reward = reply.reward;
  r.done = reply.done;
  r.gripper = reply.gripper;
  r.over_piece = reply.over_piece;
  r.outcome = reply.outcome;
  if (reply.feedback_kind) {
    r.feedback = Utterance{*reply.feedback_kind, reply.observation.fb_text, reply.observation.fb_tokens};
  }
  return r;
}

}  // namespace cogrip::service
