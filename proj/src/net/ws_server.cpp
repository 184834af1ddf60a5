#include "showdown/net/ws_server.hpp"

#include <array>
#include <atomic>
#include <deque>
#include <mutex>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "showdown/net/protocol.hpp"

namespace showdown::net {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

}  // namespace

WsOptions parse_bind(const std::string& bind) {
  WsOptions o;
  std::string port = bind;
  const auto colon = bind.rfind(':');
  if (colon != std::string::npos) {
    if (colon > 0) o.host = bind.substr(0, colon);
    port = bind.substr(colon + 1);
  }
  std::size_t used = 0;
  unsigned long p = 0;
  try {
    p = std::stoul(port, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (port.empty() || used != port.size() || p > 65535) {
    throw std::invalid_argument("bad bind address '" + bind + "'");
  }
  o.port = static_cast<std::uint16_t>(p);
  return o;
}

struct WsServer::Impl {
  class Session;

  Impl(const ServerConfig& c, const WsOptions& o, TickHook h)
      : config(c), options(o), hook(std::move(h)), acceptor(ioc), game(c) {
    const tcp::endpoint ep{asio::ip::make_address(options.host), options.port};
    acceptor.open(ep.protocol());
    acceptor.set_option(asio::socket_base::reuse_address(true));
    acceptor.bind(ep);
    acceptor.listen();
    port = acceptor.local_endpoint().port();
  }

  void accept();
  void simulate();
  void shutdown(const std::string& reason);
  [[nodiscard]] bool seats_filled() const {
    return seated[0] && (!game.accepts_inputs(PlayerId::B) || seated[1]);
  }

  ServerConfig config;
  WsOptions options;
  TickHook hook;
  asio::io_context ioc;
  tcp::acceptor acceptor;
  std::uint16_t port = 0;
  std::optional<asio::executor_work_guard<asio::io_context::executor_type>> work;

  // Network side; touched only on the I/O thread.
  std::array<std::shared_ptr<Session>, 2> seats;
  std::vector<std::weak_ptr<Session>> sessions;

  // Shared between threads.
  std::mutex inbox_mu;
  std::deque<InputEnvelope> inbox;
  std::array<std::atomic<bool>, 2> seated{};
  std::atomic<Tick> now{0};
  std::atomic<bool> stopping{false};

  // Simulation side.
  GameServer game;
};

class WsServer::Impl::Session : public std::enable_shared_from_this<Session> {
 public:
  Session(Impl& owner, tcp::socket socket) : owner_(owner), ws_(std::move(socket)) {}

  void start() {
    ws_.text(true);
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->open_ = true;
      if (self->closing_) {
        self->closing_ = false;
        self->close(self->reason_);
        return;
      }
      self->read();
    });
  }

  void send(std::string msg) {
    if (closing_) return;
    out_.push_back(std::move(msg));
    if (out_.size() == 1) write();
  }

  /// Sends a Bye, then closes once everything queued is on the wire.
  void close(const std::string& reason) {
    if (closing_) return;
    if (!open_) {
      closing_ = true;
      reason_ = reason;
      return;
    }
    send(encode(Bye{reason}));
    closing_ = true;
    if (out_.empty()) finish();
  }

  [[nodiscard]] std::optional<int> slot() const noexcept { return slot_; }

 private:
  void read() {
    ws_.async_read(in_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->release();
        return;
      }
      self->on_message(beast::buffers_to_string(self->in_.data()));
      self->in_.consume(self->in_.size());
      self->read();
    });
  }

  void on_message(const std::string& text) {
    Message msg;
    try {
      msg = decode(text);
    } catch (const DecodeError& e) {
      if (!slot_) close(std::string("bad message: ") + e.what());
      return;
    }
    if (slot_) {
      if (const auto* in = std::get_if<ClientInput>(&msg)) {
        std::lock_guard lock(owner_.inbox_mu);
        owner_.inbox.push_back({*slot_, *in});
      }
      return;
    }
    const auto* hello = std::get_if<Hello>(&msg);
    if (!hello) {
      close("expected hello");
      return;
    }
    if (hello->version != kProtocolVersion) {
      close("unsupported protocol version " + std::to_string(hello->version));
      return;
    }
    for (PlayerId p : {PlayerId::A, PlayerId::B}) {
      const int i = static_cast<int>(index_of(p));
      if (!owner_.game.accepts_inputs(p) || owner_.seats[i]) continue;
      slot_ = i;
      owner_.seats[i] = shared_from_this();
      owner_.seated[i] = true;
      send(encode(Join{p, std::string(to_string(owner_.config.mode)), owner_.now.load()}));
      return;
    }
    close("match full");
  }

  void write() {
    ws_.async_write(asio::buffer(out_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->release();
                        return;
                      }
                      self->out_.pop_front();
                      if (!self->out_.empty()) {
                        self->write();
                      } else if (self->closing_) {
                        self->finish();
                      }
                    });
  }

  void finish() {
    release();
    ws_.async_close(websocket::close_code::normal,
                    [self = shared_from_this()](beast::error_code) {});
  }

  void release() {
    if (!slot_) return;
    auto& seat = owner_.seats[static_cast<std::size_t>(*slot_)];
    if (seat.get() == this) {
      seat.reset();
      owner_.seated[static_cast<std::size_t>(*slot_)] = false;
    }
    slot_.reset();
  }

  Impl& owner_;
  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer in_;
  std::deque<std::string> out_;
  std::optional<int> slot_;
  bool open_ = false;
  bool closing_ = false;
  std::string reason_;
};

void WsServer::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    auto s = std::make_shared<Session>(*this, std::move(socket));
    sessions.push_back(s);
    std::erase_if(sessions, [](const auto& w) { return w.expired(); });
    s->start();
    accept();
  });
}

void WsServer::Impl::shutdown(const std::string& reason) {
  beast::error_code ignored;
  acceptor.close(ignored);
  for (const auto& w : sessions) {
    if (auto s = w.lock()) s->close(reason);
  }
  work.reset();
}

void WsServer::Impl::simulate() {
  using clock = std::chrono::steady_clock;
  auto next = clock::now();
  std::vector<InputEnvelope> inputs;
  while (!stopping) {
    next += options.tick_period;
    std::this_thread::sleep_until(next);
    if (!seats_filled()) {
      next = clock::now();
      continue;
    }
    inputs.clear();
    {
      std::lock_guard lock(inbox_mu);
      inputs.assign(inbox.begin(), inbox.end());
      inbox.clear();
    }
    TickResult r = game.tick(inputs, true);
    now = r.tick;
    if (hook) hook(game, r);
    for (std::size_t i = 0; i < 2; ++i) {
      asio::post(ioc, [this, i, msg = encode(*r.snapshots[i])]() mutable {
        if (seats[i]) seats[i]->send(std::move(msg));
      });
    }
    if (game.finished() && options.stop_when_finished) {
      stopping = true;
      asio::post(ioc, [this] { shutdown("match over"); });
    }
  }
}

WsServer::WsServer(const ServerConfig& config, const WsOptions& options, TickHook hook)
    : impl_(std::make_unique<Impl>(config, options, std::move(hook))) {}

WsServer::~WsServer() = default;

std::uint16_t WsServer::port() const noexcept { return impl_->port; }

void WsServer::run() {
  Impl& m = *impl_;
  m.work.emplace(m.ioc.get_executor());
  m.accept();
  std::thread sim([&m] { m.simulate(); });
  m.ioc.run();
  m.stopping = true;
  sim.join();
}

void WsServer::stop() {
  Impl& m = *impl_;
  if (m.stopping.exchange(true)) return;
  asio::post(m.ioc, [&m] { m.shutdown("server stopping"); });
}

}  // namespace showdown::net
