#include "holme/server.hpp"

#include "holme/errors.hpp"
#include "holme/io.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

namespace holme {

namespace {

constexpr int kPollMillis = 100;

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

bool wait_readable(int fd) {
  pollfd p{fd, POLLIN, 0};
  return ::poll(&p, 1, kPollMillis) > 0 && (p.revents & POLLIN) != 0;
}

}  // namespace

// TcpServer ---------------------------------------------------------------------

TcpServer::~TcpServer() {
  stop();
  for (auto& w : workers_)
    if (w.joinable()) w.join();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void TcpServer::bind(std::uint16_t port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error(ErrorCode::kBindFailed, std::strerror(errno));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 ||
      ::listen(listen_fd_, 64) < 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error(ErrorCode::kBindFailed, "port " + std::to_string(port) + ": " + why);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

void TcpServer::run() {
  if (listen_fd_ < 0) throw Error(ErrorCode::kBindFailed, "run() before bind()");
  while (!stopping_) {
    if (!wait_readable(listen_fd_)) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    std::lock_guard lock(mutex_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    open_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void TcpServer::stop() {
  stopping_ = true;
  std::lock_guard lock(mutex_);
  for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
}

void TcpServer::serve_connection(int fd) {
  FrameDecoder decoder;
  char chunk[64 * 1024];
  bool open = true;
  while (open && !stopping_) {
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    decoder.feed({chunk, static_cast<std::size_t>(n)});
    while (auto frame = decoder.next()) {
      if (!send_all(fd, encode_frame(handler_.handle(*frame)))) {
        open = false;
        break;
      }
    }
    if (decoder.oversized()) {
      const std::string reply =
          make_error("", kErrFrameTooLarge,
                     "declared length " + std::to_string(decoder.declared_length()) +
                         " exceeds " + std::to_string(kMaxFrameBytes))
              .dump();
      send_all(fd, encode_frame(reply));
      break;
    }
  }
  std::lock_guard lock(mutex_);
  open_fds_.erase(std::remove(open_fds_.begin(), open_fds_.end(), fd), open_fds_.end());
  ::close(fd);
}

// WebSocketServer ----------------------------------------------------------------

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

struct WebSocketServer::Impl {
  Impl(const MessageHandler& h, std::optional<std::filesystem::path> root)
      : handler(h), static_root(std::move(root)) {}

  void session(tcp::socket& socket);
  http::response<http::string_body> serve_static(const http::request<http::string_body>& req) const;

  const MessageHandler& handler;
  std::optional<std::filesystem::path> static_root;
  net::io_context ioc;
  std::optional<tcp::acceptor> acceptor;
  std::atomic<bool> stopping{false};
  std::mutex mutex;
  std::vector<int> open_fds;
  std::vector<std::thread> workers;
};

namespace {

std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".wasm") return "application/wasm";
  return "application/octet-stream";
}

}  // namespace

http::response<http::string_body> WebSocketServer::Impl::serve_static(
    const http::request<http::string_body>& req) const {
  http::response<http::string_body> res;
  res.version(req.version());
  res.keep_alive(false);
  auto not_found = [&] {
    res.result(http::status::not_found);
    res.set(http::field::content_type, "text/plain");
    res.body() = "not found\n";
    res.prepare_payload();
    return res;
  };
  if (!static_root || req.method() != http::verb::get) return not_found();
  std::string target(req.target());
  if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
  if (target.empty() || target.front() != '/' || target.find("..") != std::string::npos)
    return not_found();
  if (target.back() == '/') target += "index.html";
  const auto path = *static_root / target.substr(1);
  if (!std::filesystem::is_regular_file(path)) return not_found();
  try {
    res.body() = read_file(path);
  } catch (const Error&) {
    return not_found();
  }
  res.result(http::status::ok);
  res.set(http::field::content_type, std::string(mime_type(path)));
  res.prepare_payload();
  return res;
}

void WebSocketServer::Impl::session(tcp::socket& socket) {
  beast::error_code ec;
  beast::flat_buffer buffer;
  http::request<http::string_body> req;
  http::read(socket, buffer, req, ec);
  if (ec) return;

  if (!websocket::is_upgrade(req) || req.target() != "/ws") {
    http::write(socket, serve_static(req), ec);
    socket.shutdown(tcp::socket::shutdown_send, ec);
    return;
  }

  websocket::stream<tcp::socket&> ws(socket);
  ws.read_message_max(kMaxFrameBytes);
  ws.accept(req, ec);
  if (ec) return;
  while (!stopping) {
    beast::flat_buffer message;
    ws.read(message, ec);
    if (ec) break;
    const std::string reply = handler.handle(beast::buffers_to_string(message.data()));
    ws.text(true);
    ws.write(net::buffer(reply), ec);
    if (ec) break;
  }
  if (ws.is_open()) ws.close(websocket::close_code::normal, ec);
}

WebSocketServer::WebSocketServer(const MessageHandler& handler,
                                 std::optional<std::filesystem::path> static_root)
    : impl_(std::make_unique<Impl>(handler, std::move(static_root))) {}

WebSocketServer::~WebSocketServer() {
  stop();
  for (auto& w : impl_->workers)
    if (w.joinable()) w.join();
}

void WebSocketServer::bind(std::uint16_t port) {
  try {
    impl_->acceptor.emplace(impl_->ioc);
    const tcp::endpoint endpoint(tcp::v4(), port);
    impl_->acceptor->open(endpoint.protocol());
    impl_->acceptor->set_option(net::socket_base::reuse_address(true));
    impl_->acceptor->bind(endpoint);
    impl_->acceptor->listen();
  } catch (const boost::system::system_error& e) {
    impl_->acceptor.reset();
    throw Error(ErrorCode::kBindFailed, "port " + std::to_string(port) + ": " + e.what());
  }
}

std::uint16_t WebSocketServer::port() const {
  return impl_->acceptor ? impl_->acceptor->local_endpoint().port() : 0;
}

void WebSocketServer::run() {
  if (!impl_->acceptor) throw Error(ErrorCode::kBindFailed, "run() before bind()");
  while (!impl_->stopping) {
    if (!wait_readable(impl_->acceptor->native_handle())) continue;
    beast::error_code ec;
    tcp::socket socket(impl_->ioc);
    impl_->acceptor->accept(socket, ec);
    if (ec) continue;
    const int fd = socket.native_handle();
    std::lock_guard lock(impl_->mutex);
    if (impl_->stopping) break;
    impl_->open_fds.push_back(fd);
    impl_->workers.emplace_back([impl = impl_.get(), fd, s = std::move(socket)]() mutable {
      impl->session(s);
      std::lock_guard guard(impl->mutex);
      auto& fds = impl->open_fds;
      fds.erase(std::remove(fds.begin(), fds.end(), fd), fds.end());
      beast::error_code ignored;
      s.close(ignored);
    });
  }
}

void WebSocketServer::stop() {
  impl_->stopping = true;
  std::lock_guard lock(impl_->mutex);
  for (int fd : impl_->open_fds) ::shutdown(fd, SHUT_RDWR);
}

}  // namespace holme
