#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "escot/channel.hpp"
#include "escot/errors.hpp"

// Binary framing and serialization. Layouts are byte-exact and documented
// in PROTOCOL.md; all multi-byte integers are big-endian.

namespace escot::wire {

inline constexpr std::uint32_t kMaxFramePayload = 16u << 20;  // 16 MiB
inline constexpr std::uint8_t kProtocolVersion = 1;

enum class FrameType : std::uint8_t {
  Hello = 0x01,
  Accept = 0x02,
  Reject = 0x03,
  BaseOtA = 0x10,
  BaseOtB = 0x11,
  BaseOtCiphertexts = 0x12,
  EntryBegin = 0x20,
  StripeRequest = 0x21,
  ExtendCorrection = 0x22,
  ExtendMasked = 0x23,
  EntryAbort = 0x24,
  EntryDone = 0x25,
  SessionDone = 0x26,
};

const char* frame_type_name(FrameType type);

struct Frame {
  FrameType type;
  std::vector<std::uint8_t> payload;
};

void write_frame(Channel& ch, FrameType type, std::span<const std::uint8_t> payload);
Frame read_frame(Channel& ch);
// read_frame + type check; throws ProtocolError on mismatch.
Frame expect_frame(Channel& ch, FrameType type);

// Bit packing, little-endian bit order within each byte:
// bit i of the vector lands in byte i/8 at position i%8.
std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> unpack_bits(std::span<const std::uint8_t> bytes, std::size_t count);

inline std::size_t packed_size(std::size_t bits) { return (bits + 7) / 8; }
inline int get_bit(const std::uint8_t* bytes, std::size_t i) { return (bytes[i >> 3] >> (i & 7)) & 1; }
inline void set_bit(std::uint8_t* bytes, std::size_t i, int v) {
  if (v)
    bytes[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7));
  else
    bytes[i >> 3] &= static_cast<std::uint8_t>(~(1u << (i & 7)));
}

// Big-endian payload building / parsing with bounds checks.
class PayloadWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void bytes(std::span<const std::uint8_t> data);          // raw
  void string16(const std::string& s);                     // u16 length prefix
  void bytes16(std::span<const std::uint8_t> data);        // u16 length prefix
  const std::vector<std::uint8_t>& data() const { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

class PayloadReader {
 public:
  explicit PayloadReader(std::span<const std::uint8_t> data) : data_(data) {}
  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  std::span<const std::uint8_t> bytes(std::size_t n);
  std::string string16();
  std::vector<std::uint8_t> bytes16();
  bool done() const { return pos_ == data_.size(); }
  void expect_done() const;

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace escot::wire
