#include "cogrip/service/server.hpp"

#include <cstdlib>
#include <deque>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace cogrip::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using boost::system::error_code;

std::string bind_address_from_env() {
  const char* value = std::getenv(kBindAddressEnv);
  return value && *value ? value : kDefaultBindAddress;
}

namespace {

class TcpConnection : public std::enable_shared_from_this<TcpConnection> {
 public:
  TcpConnection(tcp::socket socket, Service& service, std::chrono::milliseconds heartbeat)
      : socket_(std::move(socket)),
        timer_(socket_.get_executor()),
        service_(service),
        heartbeat_(heartbeat) {}

  ~TcpConnection() { service_.release(owned_); }

  void start() { read(); }

 private:
  void read() {
    timer_.expires_after(heartbeat_);
    timer_.async_wait([self = shared_from_this()](error_code ec) {
      if (!ec) self->socket_.close(ec);
    });
    asio::async_read_until(socket_, buffer_, '\n',
                           [self = shared_from_this()](error_code ec, std::size_t n) {
                             self->on_read(ec, n);
                           });
  }

  void on_read(error_code ec, std::size_t n) {
    timer_.cancel();
    if (ec) return;
    std::string line(asio::buffers_begin(buffer_.data()),
                     asio::buffers_begin(buffer_.data()) + static_cast<std::ptrdiff_t>(n));
    buffer_.consume(n);
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    if (line.empty()) return read();

    std::optional<std::string> created;
    out_.clear();
    for (const std::string& doc : service_.handle_line(line, &created)) {
      out_ += doc;
      out_ += '\n';
    }
    if (created) owned_.push_back(*created);
    asio::async_write(socket_, asio::buffer(out_),
                      [self = shared_from_this()](error_code ec, std::size_t) {
                        if (!ec) self->read();
                      });
  }

  tcp::socket socket_;
  asio::steady_timer timer_;
  asio::streambuf buffer_;
  std::string out_;
  Service& service_;
  std::chrono::milliseconds heartbeat_;
  std::vector<std::string> owned_;
};

class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket socket, Service& service, std::chrono::milliseconds heartbeat)
      : ws_(std::move(socket)), service_(service) {
    websocket::stream_base::timeout timeout{};
    timeout.handshake_timeout = std::chrono::seconds(30);
    timeout.idle_timeout = heartbeat;
    timeout.keep_alive_pings = true;
    ws_.set_option(timeout);
  }

  ~WsConnection() { service_.release(owned_); }

  void start() {
    ws_.async_accept([self = shared_from_this()](error_code ec) {
      if (!ec) self->read();
    });
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](error_code ec, std::size_t) {
      self->on_read(ec);
    });
  }

  void on_read(error_code ec) {
    if (ec) return;
    const std::string message = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    std::optional<std::string> created;
    for (std::string& doc : service_.handle_line(message, &created)) queue_.push_back(std::move(doc));
    if (created) owned_.push_back(*created);
    write_next();
  }

  void write_next() {
    if (queue_.empty()) return read();
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()),
                    [self = shared_from_this()](error_code ec, std::size_t) {
                      if (ec) return;
                      self->queue_.pop_front();
                      self->write_next();
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  Service& service_;
  std::vector<std::string> owned_;
};

}  // namespace

struct Server::Impl {
  Impl(Service& s, ServerOptions o) : service(s), options(std::move(o)), reaper(ioc), signals(ioc) {}

  template <typename Connection>
  void accept(tcp::acceptor& acceptor) {
    acceptor.async_accept(asio::make_strand(ioc), [this, &acceptor](error_code ec, tcp::socket socket) {
      if (ec == asio::error::operation_aborted || !acceptor.is_open()) return;
      if (!ec) {
        socket.set_option(tcp::no_delay(true), ec);
        std::make_shared<Connection>(std::move(socket), service, options.heartbeat)->start();
      }
      accept<Connection>(acceptor);
    });
  }

  void open(tcp::acceptor& acceptor, std::uint16_t port) {
    error_code ec;
    const auto address = asio::ip::make_address(options.bind_address, ec);
    if (ec) throw Error("bad bind address '" + options.bind_address + "': " + ec.message());
    const tcp::endpoint endpoint(address, port);
    acceptor.open(endpoint.protocol(), ec);
    if (!ec) acceptor.set_option(asio::socket_base::reuse_address(true), ec);
    if (!ec) acceptor.bind(endpoint, ec);
    if (!ec) acceptor.listen(asio::socket_base::max_listen_connections, ec);
    if (ec) {
      throw Error("cannot listen on " + options.bind_address + ":" + std::to_string(port) + ": " +
                  ec.message());
    }
  }

  void schedule_reap() {
    reaper.expires_after(options.reap_interval);
    reaper.async_wait([this](error_code ec) {
      if (ec) return;
      service.reap();
      schedule_reap();
    });
  }

  Service& service;
  ServerOptions options;
  asio::io_context ioc;
  tcp::acceptor tcp_acceptor{ioc};
  std::optional<tcp::acceptor> ws_acceptor;
  asio::steady_timer reaper;
  asio::signal_set signals;
  std::vector<std::thread> threads;
};

Server::Server(Service& service, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {}

Server::~Server() {
  stop();
  wait();
}

void Server::start() {
  Impl& s = *impl_;
  s.open(s.tcp_acceptor, s.options.tcp_port);
  s.accept<TcpConnection>(s.tcp_acceptor);
  if (s.options.ws_port) {
    s.ws_acceptor.emplace(s.ioc);
    s.open(*s.ws_acceptor, *s.options.ws_port);
    s.accept<WsConnection>(*s.ws_acceptor);
  }
  s.schedule_reap();

  error_code ec;
  s.signals.add(SIGINT, ec);
  s.signals.add(SIGTERM, ec);
  s.signals.async_wait([this](error_code e, int) {
    if (!e) stop();
  });

  unsigned n = s.options.threads ? s.options.threads : std::thread::hardware_concurrency();
  n = std::max(1u, n);
  for (unsigned i = 0; i < n; ++i) s.threads.emplace_back([&s] { s.ioc.run(); });
}

void Server::stop() { impl_->ioc.stop(); }

void Server::wait() {
  for (auto& t : impl_->threads) {
    if (t.joinable()) t.join();
  }
  impl_->threads.clear();
}

std::uint16_t Server::tcp_port() const { return impl_->tcp_acceptor.local_endpoint().port(); }

std::optional<std::uint16_t> Server::ws_port() const {
  if (!impl_->ws_acceptor) return std::nullopt;
  return impl_->ws_acceptor->local_endpoint().port();
}

}  // namespace cogrip::service
