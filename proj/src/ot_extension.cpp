#include "escot/ot_extension.hpp"

#include <bit>
#include <cstring>

#include "escot/kernels.hpp"
#include "escot/wire.hpp"

namespace escot {

namespace {

void check_kappa(std::uint32_t kappa) {
  if (kappa != 80 && kappa != 128) throw InvalidParameter("kappa must be 80 or 128");
}

std::size_t column_stride(std::size_t count) { return wire::packed_size(count); }

}  // namespace

CodeBook CodeBook::build(std::size_t n, std::uint32_t kappa) {
  check_kappa(kappa);
  if (n < 2 || n > kappa) throw InvalidParameter("codebook needs 2 <= n <= kappa");
  std::size_t block = std::bit_ceil(n);
  if (kappa % block != 0)
    throw InvalidParameter("padded value count " + std::to_string(block) +
                           " does not divide kappa");
  CodeBook cb;
  cb.n = n;
  cb.kappa = kappa;
  cb.codewords.assign(n * cb.row_bytes(), 0);
  for (std::size_t v = 0; v < n; ++v) {
    std::uint8_t* row = cb.codewords.data() + v * cb.row_bytes();
    for (std::size_t bit = 0; bit < kappa; ++bit) {
      std::size_t x = bit % block;
      int parity = std::popcount(v & x) & 1;
      wire::set_bit(row, bit, parity);
    }
  }
  return cb;
}

std::span<const std::uint8_t> CodeBook::codeword(std::size_t v) const {
  if (v >= n) throw ChoiceOutOfRange("codeword index " + std::to_string(v));
  return {codewords.data() + v * row_bytes(), row_bytes()};
}

std::size_t CodeBook::hamming_distance(std::size_t a, std::size_t b) const {
  auto ra = codeword(a), rb = codeword(b);
  std::size_t d = 0;
  for (std::size_t i = 0; i < ra.size(); ++i)
    d += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(ra[i] ^ rb[i])));
  return d;
}

ExtensionSender::ExtensionSender(const BaseOtReceiverBatch& seeds, CodeBook codebook,
                                 const SessionId& session, std::uint64_t expected_ots)
    : codebook_(std::move(codebook)), session_(session), expected_(expected_ots) {
  if (expected_ots == 0) throw InvalidParameter("expected_ots must be positive");
  if (seeds.kappa != codebook_.kappa) throw DimensionMismatch("base-OT batch width != kappa");
  s_bits_ = wire::pack_bits(seeds.choice_bits);
  masked_codewords_.assign(codebook_.n * codebook_.row_bytes(), 0);
  for (std::size_t v = 0; v < codebook_.n; ++v) {
    std::uint8_t* row = masked_codewords_.data() + v * codebook_.row_bytes();
    auto cw = codebook_.codeword(v);
    for (std::size_t b = 0; b < cw.size(); ++b) row[b] = static_cast<std::uint8_t>(cw[b] & s_bits_[b]);
  }
  streams_.reserve(seeds.kappa);
  for (std::uint32_t i = 0; i < seeds.kappa; ++i) streams_.emplace_back(seeds.seed(i));
}

std::vector<std::uint8_t> ExtensionSender::extend(std::size_t count,
                                                  std::span<const std::uint8_t> correction,
                                                  std::span<const std::uint8_t> message_bits) {
  const std::size_t row_bytes = codebook_.row_bytes();
  if (correction.size() != count * row_bytes)
    throw DimensionMismatch("correction matrix does not match transfer count");
  if (message_bits.size() != wire::packed_size(count * codebook_.n))
    throw DimensionMismatch("message set does not match transfer count");
  if (count > kMaxInFlightOts) throw InvalidParameter("batch exceeds in-flight cap");
  if (cursor_ + count > expected_) throw InvalidParameter("extension capacity exhausted");
  if (count == 0) return {};

  // Column expansion of the chosen seeds, then transpose to per-transfer
  // rows: row_j = PRG-row ^ (correction_j AND s) equals T_j ^ (C(r_j) AND s).
  const std::size_t stride = column_stride(count);
  std::vector<std::uint8_t> columns(codebook_.kappa * stride);
  kernels::expand_columns(streams_, stride, columns.data(), stride);
  std::vector<std::uint8_t> rows(count * row_bytes, 0);
  kernels::transpose_bits(columns.data(), codebook_.kappa, count, stride, rows.data(), row_bytes);
  for (std::size_t j = 0; j < count; ++j) {
    std::uint8_t* row = rows.data() + j * row_bytes;
    const std::uint8_t* corr = correction.data() + j * row_bytes;
    for (std::size_t b = 0; b < row_bytes; ++b)
      row[b] ^= static_cast<std::uint8_t>(corr[b] & s_bits_[b]);
  }

  std::vector<std::uint8_t> masked(wire::packed_size(count * codebook_.n), 0);
  kernels::mask_sender_rows(session_, cursor_, rows.data(), count, row_bytes,
                            masked_codewords_.data(), codebook_.n, message_bits.data(),
                            masked.data());
  cursor_ += count;
  return masked;
}

ExtensionReceiver::ExtensionReceiver(const BaseOtSenderBatch& seeds, CodeBook codebook,
                                     const SessionId& session, std::uint64_t expected_ots)
    : codebook_(std::move(codebook)), session_(session), expected_(expected_ots) {
  if (expected_ots == 0) throw InvalidParameter("expected_ots must be positive");
  if (seeds.kappa != codebook_.kappa) throw DimensionMismatch("base-OT batch width != kappa");
  streams0_.reserve(seeds.kappa);
  streams1_.reserve(seeds.kappa);
  for (std::uint32_t i = 0; i < seeds.kappa; ++i) {
    streams0_.emplace_back(seeds.seed0(i));
    streams1_.emplace_back(seeds.seed1(i));
  }
}

std::uint64_t ExtensionReceiver::column_bytes_generated() const {
  return streams0_.empty() ? 0 : streams0_.front().bytes_generated();
}

std::vector<std::uint8_t> ExtensionReceiver::extend(std::span<const std::uint8_t> choices) {
  const std::size_t count = choices.size();
  const std::size_t row_bytes = codebook_.row_bytes();
  if (count > kMaxInFlightOts) throw InvalidParameter("batch exceeds in-flight cap");
  if (cursor_ + count > expected_) throw InvalidParameter("extension capacity exhausted");
  if (pending_) throw Error("previous batch not yet unmasked");
  for (auto c : choices)
    if (c >= codebook_.n) throw ChoiceOutOfRange("choice " + std::to_string(c));
  if (count == 0) {
    pending_ = PendingBatch{cursor_, {}, {}};
    return {};
  }

  const std::size_t stride = column_stride(count);
  std::vector<std::uint8_t> columns(codebook_.kappa * stride);
  kernels::expand_columns(streams0_, stride, columns.data(), stride);
  std::vector<std::uint8_t> t_rows(count * row_bytes, 0);
  kernels::transpose_bits(columns.data(), codebook_.kappa, count, stride, t_rows.data(), row_bytes);

  kernels::expand_columns(streams1_, stride, columns.data(), stride);
  std::vector<std::uint8_t> correction(count * row_bytes, 0);
  kernels::transpose_bits(columns.data(), codebook_.kappa, count, stride, correction.data(),
                          row_bytes);

  // correction_j = T_j ^ U_j ^ C(r_j); the U expansion hides the codeword
  // from the sender's unchosen column view.
  for (std::size_t j = 0; j < count; ++j) {
    std::uint8_t* row = correction.data() + j * row_bytes;
    kernels::xor_bytes(row, t_rows.data() + j * row_bytes, row_bytes);
    kernels::xor_bytes(row, codebook_.codeword(choices[j]).data(), row_bytes);
  }

  pending_ = PendingBatch{cursor_, std::vector<std::uint8_t>(choices.begin(), choices.end()),
                          std::move(t_rows)};
  cursor_ += count;
  return correction;
}

std::vector<std::uint8_t> ExtensionReceiver::unmask(std::span<const std::uint8_t> masked_bits) {
  if (!pending_) throw Error("no batch awaiting masked bits");
  PendingBatch batch = std::move(*pending_);
  pending_.reset();
  const std::size_t count = batch.choices.size();
  if (masked_bits.size() != wire::packed_size(count * codebook_.n))
    throw DimensionMismatch("masked payload does not match pending batch");
  std::vector<std::uint8_t> results(count);
  if (count == 0) return results;
  kernels::unmask_receiver_rows(session_, batch.base_index, batch.t_rows.data(), count,
                                codebook_.row_bytes(), batch.choices.data(), codebook_.n,
                                masked_bits.data(), results.data());
  return results;
}

}  // namespace escot
