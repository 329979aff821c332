#include "escot/wire.hpp"

#include <cstring>

namespace escot::wire {

const char* frame_type_name(FrameType type) {
  switch (type) {
    case FrameType::Hello: return "HELLO";
    case FrameType::Accept: return "ACCEPT";
    case FrameType::Reject: return "REJECT";
    case FrameType::BaseOtA: return "BASEOT_A";
    case FrameType::BaseOtB: return "BASEOT_B";
    case FrameType::BaseOtCiphertexts: return "BASEOT_CIPHERTEXTS";
    case FrameType::EntryBegin: return "ENTRY_BEGIN";
    case FrameType::StripeRequest: return "STRIPE_REQUEST";
    case FrameType::ExtendCorrection: return "EXTEND_CORRECTION";
    case FrameType::ExtendMasked: return "EXTEND_MASKED";
    case FrameType::EntryAbort: return "ENTRY_ABORT";
    case FrameType::EntryDone: return "ENTRY_DONE";
    case FrameType::SessionDone: return "SESSION_DONE";
  }
  return "?";
}

namespace {

bool known_type(std::uint8_t t) {
  switch (static_cast<FrameType>(t)) {
    case FrameType::Hello:
    case FrameType::Accept:
    case FrameType::Reject:
    case FrameType::BaseOtA:
    case FrameType::BaseOtB:
    case FrameType::BaseOtCiphertexts:
    case FrameType::EntryBegin:
    case FrameType::StripeRequest:
    case FrameType::ExtendCorrection:
    case FrameType::ExtendMasked:
    case FrameType::EntryAbort:
    case FrameType::EntryDone:
    case FrameType::SessionDone:
      return true;
  }
  return false;
}

}  // namespace

void write_frame(Channel& ch, FrameType type, std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxFramePayload)
    throw FrameTooLarge("frame payload of " + std::to_string(payload.size()) + " bytes exceeds cap");
  std::uint8_t header[5];
  std::uint32_t len = static_cast<std::uint32_t>(payload.size());
  header[0] = static_cast<std::uint8_t>(len >> 24);
  header[1] = static_cast<std::uint8_t>(len >> 16);
  header[2] = static_cast<std::uint8_t>(len >> 8);
  header[3] = static_cast<std::uint8_t>(len);
  header[4] = static_cast<std::uint8_t>(type);
  ch.write_all(header);
  ch.write_all(payload);
}

Frame read_frame(Channel& ch) {
  std::uint8_t header[5];
  ch.read_exact(header);
  std::uint32_t len = (std::uint32_t(header[0]) << 24) | (std::uint32_t(header[1]) << 16) |
                      (std::uint32_t(header[2]) << 8) | std::uint32_t(header[3]);
  if (len > kMaxFramePayload)
    throw FrameTooLarge("incoming frame of " + std::to_string(len) + " bytes exceeds cap");
  if (!known_type(header[4]))
    throw UnknownFrameType("unknown frame tag 0x" + std::to_string(header[4]));
  Frame f;
  f.type = static_cast<FrameType>(header[4]);
  f.payload.resize(len);
  ch.read_exact(f.payload);
  return f;
}

Frame expect_frame(Channel& ch, FrameType type) {
  Frame f = read_frame(ch);
  if (f.type != type)
    throw ProtocolError(std::string("expected ") + frame_type_name(type) + ", got " +
                        frame_type_name(f.type));
  return f;
}

std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> out(packed_size(bits.size()), 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7));
  return out;
}

std::vector<std::uint8_t> unpack_bits(std::span<const std::uint8_t> bytes, std::size_t count) {
  if (count > bytes.size() * 8)
    throw CountOutOfRange("unpack of " + std::to_string(count) + " bits from " +
                          std::to_string(bytes.size()) + " bytes");
  std::vector<std::uint8_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<std::uint8_t>(get_bit(bytes.data(), i));
  return out;
}

void PayloadWriter::u16(std::uint16_t v) {
  buf_.push_back(static_cast<std::uint8_t>(v >> 8));
  buf_.push_back(static_cast<std::uint8_t>(v));
}

void PayloadWriter::u32(std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
}

void PayloadWriter::u64(std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
}

void PayloadWriter::bytes(std::span<const std::uint8_t> data) {
  buf_.insert(buf_.end(), data.begin(), data.end());
}

void PayloadWriter::string16(const std::string& s) {
  if (s.size() > 0xFFFF) throw InvalidParameter("string too long for u16 prefix");
  u16(static_cast<std::uint16_t>(s.size()));
  buf_.insert(buf_.end(), s.begin(), s.end());
}

void PayloadWriter::bytes16(std::span<const std::uint8_t> data) {
  if (data.size() > 0xFFFF) throw InvalidParameter("blob too long for u16 prefix");
  u16(static_cast<std::uint16_t>(data.size()));
  bytes(data);
}

std::uint8_t PayloadReader::u8() {
  if (pos_ + 1 > data_.size()) throw ProtocolError("truncated payload");
  return data_[pos_++];
}

std::uint16_t PayloadReader::u16() {
  std::uint16_t v = u8();
  return static_cast<std::uint16_t>((v << 8) | u8());
}

std::uint32_t PayloadReader::u32() {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
  return v;
}

std::uint64_t PayloadReader::u64() {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | u8();
  return v;
}

std::span<const std::uint8_t> PayloadReader::bytes(std::size_t n) {
  if (pos_ + n > data_.size()) throw ProtocolError("truncated payload");
  auto s = data_.subspan(pos_, n);
  pos_ += n;
  return s;
}

std::string PayloadReader::string16() {
  std::size_t n = u16();
  auto s = bytes(n);
  return std::string(s.begin(), s.end());
}

std::vector<std::uint8_t> PayloadReader::bytes16() {
  std::size_t n = u16();
  auto s = bytes(n);
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

void PayloadReader::expect_done() const {
  if (!done()) throw ProtocolError("trailing bytes in payload");
}

}  // namespace escot::wire
