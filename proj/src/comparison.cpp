#include "escot/comparison.hpp"

#include "escot/wire.hpp"

namespace escot {

std::vector<std::uint8_t> one_hot_messages(std::uint8_t y, std::size_t n) {
  if (y >= n) throw CodeOutOfRange("character code " + std::to_string(y) + " for n=" +
                                   std::to_string(n));
  std::vector<std::uint8_t> bits(n, 0);
  for (std::size_t k = 0; k < n; ++k)
    if ((k + n - y) % n == 0) bits[k] = 1;
  return bits;
}

void serve_comparisons(const EncodedSequence& y, std::span<const IndexPair> pairs,
                       ExtensionSender& ext, wire::CountingChannel& ch) {
  const std::size_t n = ext.codebook().n;
  const std::size_t count = pairs.size();

  wire::Frame corr = wire::expect_frame(ch, wire::FrameType::ExtendCorrection);
  wire::PayloadReader reader(corr.payload);
  if (reader.u32() != count) throw ProtocolError("correction batch size mismatch");
  auto rows = reader.bytes(count * ext.codebook().row_bytes());
  reader.expect_done();
  ch.add_payload_bits(static_cast<std::uint64_t>(count) * ext.codebook().kappa);

  std::vector<std::uint8_t> message_bits(wire::packed_size(count * n), 0);
  for (std::size_t t = 0; t < count; ++t) {
    std::uint8_t code = y.codes.at(pairs[t].j);
    auto one_hot = one_hot_messages(code, n);
    for (std::size_t v = 0; v < n; ++v) wire::set_bit(message_bits.data(), t * n + v, one_hot[v]);
  }

  std::vector<std::uint8_t> masked = ext.extend(count, rows, message_bits);
  wire::PayloadWriter out;
  out.u32(static_cast<std::uint32_t>(count));
  out.bytes(masked);
  wire::write_frame(ch, wire::FrameType::ExtendMasked, out.data());
  ch.flush();
  ch.add_payload_bits(static_cast<std::uint64_t>(count) * n);
}

std::vector<std::uint8_t> request_comparisons(const EncodedSequence& x,
                                              std::span<const IndexPair> pairs,
                                              ExtensionReceiver& ext, wire::CountingChannel& ch) {
  const std::size_t n = ext.codebook().n;
  const std::size_t count = pairs.size();

  std::vector<std::uint8_t> choices(count);
  for (std::size_t t = 0; t < count; ++t) choices[t] = x.codes.at(pairs[t].i);

  std::vector<std::uint8_t> correction = ext.extend(choices);
  wire::PayloadWriter out;
  out.u32(static_cast<std::uint32_t>(count));
  out.bytes(correction);
  wire::write_frame(ch, wire::FrameType::ExtendCorrection, out.data());
  ch.flush();
  ch.add_payload_bits(static_cast<std::uint64_t>(count) * ext.codebook().kappa);

  wire::Frame masked = wire::expect_frame(ch, wire::FrameType::ExtendMasked);
  wire::PayloadReader reader(masked.payload);
  if (reader.u32() != count) throw ProtocolError("masked batch size mismatch");
  auto bits = reader.bytes(wire::packed_size(count * n));
  reader.expect_done();
  ch.add_payload_bits(static_cast<std::uint64_t>(count) * n);

  return ext.unmask(bits);
}

}  // namespace escot
