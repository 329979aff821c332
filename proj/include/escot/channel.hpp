#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "escot/errors.hpp"

namespace escot::wire {

// Byte-stream transport. A channel is owned by one session; reads and
// writes never interleave across threads.
class Channel {
 public:
  virtual ~Channel() = default;

  virtual void write_all(std::span<const std::uint8_t> data) = 0;
  // Returns 0 only on orderly close.
  virtual std::size_t read_some(std::span<std::uint8_t> out) = 0;
  virtual void flush() {}
  virtual void close() {}

  void read_exact(std::span<std::uint8_t> out);
};

// Counts framed traffic in both directions. The logical payload counter is
// maintained by callers (protocol layers) and excludes framing overhead.
class CountingChannel final : public Channel {
 public:
  explicit CountingChannel(Channel& inner) : inner_(inner) {}

  void write_all(std::span<const std::uint8_t> data) override {
    inner_.write_all(data);
    bytes_out_ += data.size();
  }
  std::size_t read_some(std::span<std::uint8_t> out) override {
    std::size_t n = inner_.read_some(out);
    bytes_in_ += n;
    return n;
  }
  void flush() override { inner_.flush(); }
  void close() override { inner_.close(); }

  std::uint64_t bytes_in() const { return bytes_in_; }
  std::uint64_t bytes_out() const { return bytes_out_; }
  std::uint64_t payload_bits() const { return payload_bits_; }
  void add_payload_bits(std::uint64_t bits) { payload_bits_ += bits; }

 private:
  Channel& inner_;
  std::uint64_t bytes_in_ = 0;
  std::uint64_t bytes_out_ = 0;
  std::uint64_t payload_bits_ = 0;
};

// In-memory duplex pair for loopback tests. Destroying or closing one end
// makes reads on the peer return end-of-stream once drained.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_pipe();

// Writes are buffered until flush() so a batch's frames leave as one
// segment; reads are unbuffered.
class TcpChannel final : public Channel {
 public:
  static TcpChannel connect(const std::string& host, std::uint16_t port);
  explicit TcpChannel(int fd);
  TcpChannel(TcpChannel&& other) noexcept;
  TcpChannel& operator=(TcpChannel&& other) noexcept;
  ~TcpChannel() override;

  void write_all(std::span<const std::uint8_t> data) override;
  std::size_t read_some(std::span<std::uint8_t> out) override;
  void flush() override;
  void close() override;

 private:
  void send_all(std::span<const std::uint8_t> data);

  int fd_ = -1;
  std::vector<std::uint8_t> write_buffer_;
};

class TcpListener {
 public:
  // port 0 binds an ephemeral port; see port().
  static TcpListener bind(const std::string& host, std::uint16_t port);
  TcpListener(TcpListener&& other) noexcept;
  TcpListener& operator=(TcpListener&& other) noexcept;
  ~TcpListener();

  TcpChannel accept();
  std::uint16_t port() const { return port_; }
  // Safe to call from another thread: unblocks a pending accept(), which
  // then throws TransportError.
  void close();

 private:
  explicit TcpListener(int fd, std::uint16_t port) : fd_(fd), port_(port) {}
  std::atomic<int> fd_{-1};
  std::uint16_t port_ = 0;
};

}  // namespace escot::wire
