#include "escot/channel.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

namespace escot::wire {

void Channel::read_exact(std::span<std::uint8_t> out) {
  std::size_t got = 0;
  while (got < out.size()) {
    std::size_t n = read_some(out.subspan(got));
    if (n == 0) throw ConnectionClosed("stream closed mid-message");
    got += n;
  }
}

namespace {

// One direction of the in-memory pipe.
struct PipeBuffer {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::uint8_t> data;
  bool closed = false;

  void write(std::span<const std::uint8_t> bytes) {
    std::lock_guard lock(mu);
    if (closed) throw TransportError("pipe closed");
    data.insert(data.end(), bytes.begin(), bytes.end());
    cv.notify_all();
  }

  std::size_t read(std::span<std::uint8_t> out) {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return !data.empty() || closed; });
    if (data.empty()) return 0;
    std::size_t n = std::min(out.size(), data.size());
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = data.front();
      data.pop_front();
    }
    return n;
  }

  void close() {
    std::lock_guard lock(mu);
    closed = true;
    cv.notify_all();
  }
};

class PipeChannel final : public Channel {
 public:
  PipeChannel(std::shared_ptr<PipeBuffer> rx, std::shared_ptr<PipeBuffer> tx)
      : rx_(std::move(rx)), tx_(std::move(tx)) {}
  ~PipeChannel() override { PipeChannel::close(); }

  void write_all(std::span<const std::uint8_t> data) override { tx_->write(data); }
  std::size_t read_some(std::span<std::uint8_t> out) override { return rx_->read(out); }
  void close() override {
    tx_->close();
    rx_->close();
  }

 private:
  std::shared_ptr<PipeBuffer> rx_;
  std::shared_ptr<PipeBuffer> tx_;
};

std::string errno_text(int err) {
  char buf[128];
  // GNU strerror_r; may return a static string instead of buf
  return strerror_r(err, buf, sizeof buf);
}

sockaddr_in resolve(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (host.empty() || host == "0.0.0.0") {
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    return addr;
  }
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || !res)
    throw TransportError("cannot resolve host " + host);
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  freeaddrinfo(res);
  return addr;
}

}  // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_pipe() {
  auto a = std::make_shared<PipeBuffer>();
  auto b = std::make_shared<PipeBuffer>();
  return {std::make_unique<PipeChannel>(a, b), std::make_unique<PipeChannel>(b, a)};
}

TcpChannel TcpChannel::connect(const std::string& host, std::uint16_t port) {
  sockaddr_in addr = resolve(host.empty() ? "127.0.0.1" : host, port);
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw TransportError("socket() failed");
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    int err = errno;
    ::close(fd);
    throw TransportError("connect failed: " + errno_text(err));
  }
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return TcpChannel(fd);
}

TcpChannel::TcpChannel(int fd) : fd_(fd) {}

TcpChannel::TcpChannel(TcpChannel&& other) noexcept
    : fd_(other.fd_), write_buffer_(std::move(other.write_buffer_)) {
  other.fd_ = -1;
}

TcpChannel& TcpChannel::operator=(TcpChannel&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    write_buffer_ = std::move(other.write_buffer_);
    other.fd_ = -1;
  }
  return *this;
}

TcpChannel::~TcpChannel() { close(); }

void TcpChannel::send_all(std::span<const std::uint8_t> data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) throw TransportError("send failed: " + errno_text(errno));
    sent += static_cast<std::size_t>(n);
  }
}

void TcpChannel::write_all(std::span<const std::uint8_t> data) {
  constexpr std::size_t kBufferCap = 1 << 16;
  write_buffer_.insert(write_buffer_.end(), data.begin(), data.end());
  if (write_buffer_.size() >= kBufferCap) flush();
}

void TcpChannel::flush() {
  if (write_buffer_.empty()) return;
  send_all(write_buffer_);
  write_buffer_.clear();
}

std::size_t TcpChannel::read_some(std::span<std::uint8_t> out) {
  flush();  // never block on a read while a request sits unsent
  for (;;) {
    ssize_t n = ::recv(fd_, out.data(), out.size(), 0);
    if (n > 0) return static_cast<std::size_t>(n);
    if (n == 0) return 0;
    if (errno == EINTR) continue;
    throw TransportError("recv failed: " + errno_text(errno));
  }
}

void TcpChannel::close() {
  if (fd_ >= 0) {
    try {
      flush();
    } catch (const TransportError&) {
      // peer already gone; nothing to deliver
    }
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

TcpListener TcpListener::bind(const std::string& host, std::uint16_t port) {
  sockaddr_in addr = resolve(host, port);
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw TransportError("socket() failed");
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    int err = errno;
    ::close(fd);
    throw TransportError("bind failed: " + errno_text(err));
  }
  if (::listen(fd, 16) != 0) {
    int err = errno;
    ::close(fd);
    throw TransportError("listen failed: " + errno_text(err));
  }
  socklen_t len = sizeof addr;
  getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  return TcpListener(fd, ntohs(addr.sin_port));
}

TcpListener::TcpListener(TcpListener&& other) noexcept
    : fd_(other.fd_.exchange(-1)), port_(other.port_) {}

TcpListener& TcpListener::operator=(TcpListener&& other) noexcept {
  if (this != &other) {
    close();
    fd_.store(other.fd_.exchange(-1));
    port_ = other.port_;
  }
  return *this;
}

TcpListener::~TcpListener() { close(); }

TcpChannel TcpListener::accept() {
  int fd = fd_.load();
  if (fd < 0) throw TransportError("listener closed");
  int c = ::accept(fd, nullptr, nullptr);
  if (c < 0) throw TransportError("accept failed: " + errno_text(errno));
  int one = 1;
  setsockopt(c, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return TcpChannel(c);
}

void TcpListener::close() {
  int fd = fd_.exchange(-1);
  if (fd >= 0) {
    ::shutdown(fd, SHUT_RDWR);
    ::close(fd);
  }
}

}  // namespace escot::wire
