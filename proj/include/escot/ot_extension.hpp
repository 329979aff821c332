#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "escot/base_ot.hpp"
#include "escot/crypto.hpp"
#include "escot/errors.hpp"

// 1-out-of-n OT extension for one-bit messages: IKNP-style column
// correlation with Walsh-Hadamard codewords for n > 2, roles inverted
// relative to the base OTs. Per extended transfer the receiver sends kappa
// bits (a correction row) and the sender answers with n masked bits.

namespace escot {

inline constexpr std::uint64_t kMaxInFlightOts = 1u << 20;

struct CodeBook {
  std::size_t n = 0;
  std::uint32_t kappa = 0;
  std::vector<std::uint8_t> codewords;  // n rows of kappa/8 bytes

  // Walsh-Hadamard codewords padded to the next power of two and repeated
  // to kappa bits; pairwise Hamming distance is exactly kappa/2. Requires
  // kappa in {80,128}, 2 <= n <= kappa, and 2^ceil(lg n) dividing kappa.
  static CodeBook build(std::size_t n, std::uint32_t kappa);

  std::size_t row_bytes() const { return kappa / 8; }
  std::span<const std::uint8_t> codeword(std::size_t v) const;
  std::size_t hamming_distance(std::size_t a, std::size_t b) const;
};

// Server side: holds the secret column-choice bits s from its base-OT
// receiver role plus one keystream per column.
class ExtensionSender {
 public:
  ExtensionSender(const BaseOtReceiverBatch& seeds, CodeBook codebook, const SessionId& session,
                  std::uint64_t expected_ots);

  // Processes one batch: correction is count rows of kappa bits (row-major,
  // kappa/8-byte rows); message_bits holds count*n packed bits (bit t*n+v =
  // message v of transfer t). Returns the packed masked bits, same layout.
  std::vector<std::uint8_t> extend(std::size_t count, std::span<const std::uint8_t> correction,
                                   std::span<const std::uint8_t> message_bits);

  const CodeBook& codebook() const { return codebook_; }
  std::uint64_t ots_extended() const { return cursor_; }
  std::uint64_t expected_ots() const { return expected_; }

 private:
  CodeBook codebook_;
  SessionId session_;
  std::uint64_t expected_;
  std::uint64_t cursor_ = 0;
  std::vector<std::uint8_t> s_bits_;            // packed kappa bits
  std::vector<std::uint8_t> masked_codewords_;  // n rows: codeword(v) AND s
  std::vector<crypto::KeyStream> streams_;
};

// Client side: holds both seed expansions per column.
class ExtensionReceiver {
 public:
  ExtensionReceiver(const BaseOtSenderBatch& seeds, CodeBook codebook, const SessionId& session,
                    std::uint64_t expected_ots);

  // Emits the correction matrix for one batch of choices (one row per
  // transfer) and parks the T rows until unmask() consumes the response.
  std::vector<std::uint8_t> extend(std::span<const std::uint8_t> choices);
  // masked_bits: ceil(count*n/8) bytes from the sender. Returns one 0/1
  // byte per transfer of the pending batch.
  std::vector<std::uint8_t> unmask(std::span<const std::uint8_t> masked_bits);

  const CodeBook& codebook() const { return codebook_; }
  std::uint64_t ots_extended() const { return cursor_; }
  std::uint64_t expected_ots() const { return expected_; }
  std::uint64_t column_bytes_generated() const;

 private:
  CodeBook codebook_;
  SessionId session_;
  std::uint64_t expected_;
  std::uint64_t cursor_ = 0;
  std::vector<crypto::KeyStream> streams0_;
  std::vector<crypto::KeyStream> streams1_;

  struct PendingBatch {
    std::uint64_t base_index;
    std::vector<std::uint8_t> choices;
    std::vector<std::uint8_t> t_rows;  // count x kappa/8
  };
  std::optional<PendingBatch> pending_;
};

}  // namespace escot
