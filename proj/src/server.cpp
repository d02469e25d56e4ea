#include "eiha/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <deque>
#include <fstream>
#include <iostream>

namespace eiha {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

// The tick timer and the websocket share one io_context thread, so the
// message pump (reads) and the tick loop never run at the same time; events
// still go through the session's queue and are only applied at tick start.
struct LiveServer::Impl {
  using Socket = websocket::stream<beast::tcp_stream>;

  ServeOptions opt;
  LiveSession session;
  asio::io_context io;
  tcp::acceptor acceptor{io};
  asio::steady_timer timer{io};
  std::chrono::steady_clock::time_point next_tick;
  std::chrono::microseconds period;

  std::shared_ptr<Socket> client;
  beast::flat_buffer read_buf;
  std::deque<std::string> outbox;
  bool writing = false;
  bool listening = false;

  explicit Impl(ServeOptions o)
      : opt(std::move(o)), session(opt.base, opt.condition, opt.seed) {
    period = opt.tick_period.count() > 0
                 ? opt.tick_period
                 : std::chrono::microseconds(1'000'000 / opt.base.resolution);
    session.on_episode_end([this](const LiveLog& log) { write_log(log); });
  }

  void write_log(const LiveLog& log) {
    if (opt.log_path.empty() || log.ticks == 0) return;
    std::ofstream out(opt.log_path);
    out << log.to_json().dump() << "\n";
    if (!out) std::cerr << "eiha: cannot write " << opt.log_path << "\n";
  }

  void save_log() { write_log(session.log()); }

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket sock) {
      if (ec) return;
      if (client) {
        beast::error_code ignored;
        sock.shutdown(tcp::socket::shutdown_both, ignored);
        sock.close(ignored);
        accept();
        return;
      }
      auto ws = std::make_shared<Socket>(std::move(sock));
      ws->text(true);
      ws->async_accept([this, ws](beast::error_code ec2) {
        if (!ec2) {
          client = ws;
          outbox.clear();
          writing = false;
          read();
        }
        accept();
      });
    });
  }

  void read() {
    auto ws = client;
    ws->async_read(read_buf, [this, ws](beast::error_code ec, std::size_t) {
      if (ws != client) return;
      if (ec) {
        disconnect();
        return;
      }
      const std::string text = beast::buffers_to_string(read_buf.data());
      read_buf.consume(read_buf.size());
      std::size_t start = 0;
      while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        const std::string_view doc(text.data() + start, end - start);
        if (doc.find_first_not_of(" \t\r") != std::string_view::npos)
          for (auto& reply : session.handle(doc)) send(std::move(reply));
        start = end + 1;
      }
      read();
    });
  }

  void disconnect() {
    session.pause();
    save_log();
    if (client) {
      beast::error_code ignored;
      beast::get_lowest_layer(*client).socket().close(ignored);
    }
    client.reset();
    outbox.clear();
    writing = false;
  }

  void send(std::string msg) {
    if (!client) return;
    outbox.push_back(std::move(msg));
    if (!writing) flush();
  }

  void flush() {
    if (outbox.empty() || !client) {
      writing = false;
      return;
    }
    writing = true;
    auto ws = client;
    ws->async_write(asio::buffer(outbox.front()), [this, ws](beast::error_code ec, std::size_t) {
      if (ws != client) return;
      if (ec) {
        disconnect();
        return;
      }
      outbox.pop_front();
      flush();
    });
  }

  void schedule() {
    next_tick += period;
    timer.expires_at(next_tick);
    timer.async_wait([this](beast::error_code ec) {
      if (ec) return;
      if (auto msg = session.step()) send(msg->to_json().dump() + "\n");
      // A paused session freezes the clock; ticks that fell behind are not
      // replayed in a burst.
      const auto now = std::chrono::steady_clock::now();
      if (next_tick + period < now) next_tick = now;
      schedule();
    });
  }
};

LiveServer::LiveServer(ServeOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

LiveServer::~LiveServer() = default;

std::uint16_t LiveServer::listen() {
  auto& i = *impl_;
  if (!i.listening) {
    const tcp::endpoint ep(asio::ip::make_address(i.opt.address), i.opt.port);
    i.acceptor.open(ep.protocol());
    i.acceptor.set_option(asio::socket_base::reuse_address(true));
    i.acceptor.bind(ep);
    i.acceptor.listen();
    i.listening = true;
  }
  return i.acceptor.local_endpoint().port();
}

void LiveServer::run() {
  listen();
  auto& i = *impl_;
  i.accept();
  i.next_tick = std::chrono::steady_clock::now();
  i.schedule();
  asio::signal_set signals(i.io);
  if (i.opt.handle_signals) {
    signals.add(SIGINT);
    signals.add(SIGTERM);
    signals.async_wait([this](beast::error_code ec, int) {
      if (!ec) stop();
    });
  }
  i.io.run();
  i.save_log();
}

void LiveServer::stop() {
  asio::post(impl_->io, [this] {
    beast::error_code ignored;
    impl_->acceptor.close(ignored);
    impl_->timer.cancel();
    if (impl_->client) beast::get_lowest_layer(*impl_->client).socket().close(ignored);
    impl_->io.stop();
  });
}

LiveSession& LiveServer::session() { return impl_->session; }

}  // namespace eiha
