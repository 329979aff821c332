#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "escot/channel.hpp"
#include "escot/crypto.hpp"
#include "escot/errors.hpp"

// Diffie-Hellman 1-out-of-2 oblivious transfer over fixed safe-prime
// groups, used kappa times to seed the OT extension. Sender: a, A=g^a;
// receiver: B=g^b or A*g^b by choice bit; keys k0=H(B^a), k1=H((B/A)^a),
// kR=H(A^b); messages sealed with an authenticated cipher.

namespace escot {

struct GroupParams {
  crypto::Bignum p;  // safe prime, phi bits
  crypto::Bignum g;
  crypto::Bignum q;  // order of g
  std::uint32_t phi_bits;

  std::size_t element_bytes() const { return phi_bits / 8; }

  // Fixed well-known safe-prime groups (g = 2, q = (p-1)/2) for
  // phi in {1024, 2048}.
  static const GroupParams& modp(std::uint32_t phi_bits);
  // p=23, g=5 (order 22); unit-test scale only.
  static GroupParams toy();
};

// Rejects 0, 1, p-1 and anything outside the order-q subgroup.
void validate_group_element(const GroupParams& params, const crypto::Bignum& element);

struct BaseOtSenderState {
  crypto::Bignum a;
  crypto::Bignum big_a;  // g^a mod p
};

struct BaseOtReceiverState {
  crypto::Bignum b;
  std::uint8_t r = 0;
  crypto::Bignum big_b;
  crypto::Bignum shared;      // A^b mod p
  crypto::Sha256Digest key;   // kR
};

struct SenderKeys {
  crypto::Bignum shared0;  // B^a
  crypto::Bignum shared1;  // (B/A)^a
  crypto::Sha256Digest key0;
  crypto::Sha256Digest key1;
};

using SessionId = std::array<std::uint8_t, 8>;

BaseOtSenderState base_ot_sender_round1(const GroupParams& params, crypto::RandomSource& rng);
// Deterministic variant; `a` must lie in [1, q-1].
BaseOtSenderState base_ot_sender_round1_with(const GroupParams& params, crypto::Bignum a);

BaseOtReceiverState base_ot_receiver_round2(const GroupParams& params, const crypto::Bignum& big_a,
                                            std::uint8_t r, crypto::RandomSource& rng,
                                            const SessionId& session, std::uint32_t index);
BaseOtReceiverState base_ot_receiver_round2_with(const GroupParams& params,
                                                 const crypto::Bignum& big_a, std::uint8_t r,
                                                 crypto::Bignum b, const SessionId& session,
                                                 std::uint32_t index);

SenderKeys derive_sender_keys(const GroupParams& params, const BaseOtSenderState& state,
                              const crypto::Bignum& big_b, const SessionId& session,
                              std::uint32_t index);

struct CipherPair {
  std::vector<std::uint8_t> e0;
  std::vector<std::uint8_t> e1;
};

CipherPair base_ot_sender_round3(const GroupParams& params, const BaseOtSenderState& state,
                                 const crypto::Bignum& big_b, std::span<const std::uint8_t> x0,
                                 std::span<const std::uint8_t> x1, crypto::RandomSource& rng,
                                 const SessionId& session, std::uint32_t index);

std::vector<std::uint8_t> base_ot_receiver_finish(const BaseOtReceiverState& state,
                                                  const CipherPair& ciphertexts);

// Batch results of the kappa base transfers; seeds are kappa-bit strings
// stored as seed_bytes = kappa/8 each, flat.
struct BaseOtSenderBatch {
  std::uint32_t kappa = 0;
  std::size_t seed_bytes = 0;
  std::vector<std::uint8_t> seeds0;
  std::vector<std::uint8_t> seeds1;

  std::span<const std::uint8_t> seed0(std::size_t i) const {
    return {seeds0.data() + i * seed_bytes, seed_bytes};
  }
  std::span<const std::uint8_t> seed1(std::size_t i) const {
    return {seeds1.data() + i * seed_bytes, seed_bytes};
  }
};

struct BaseOtReceiverBatch {
  std::uint32_t kappa = 0;
  std::size_t seed_bytes = 0;
  std::vector<std::uint8_t> choice_bits;  // one 0/1 byte per transfer
  std::vector<std::uint8_t> seeds;

  std::span<const std::uint8_t> seed(std::size_t i) const {
    return {seeds.data() + i * seed_bytes, seed_bytes};
  }
};

// Runs the kappa transfers pipelined in three frames (A-batch, B-batch,
// ciphertext-batch). Logical payload bits are added to the channel counter.
BaseOtSenderBatch run_base_ots_sender(const GroupParams& params, std::uint32_t kappa,
                                      wire::CountingChannel& ch, crypto::RandomSource& rng,
                                      const SessionId& session);
BaseOtReceiverBatch run_base_ots_receiver(const GroupParams& params, std::uint32_t kappa,
                                          std::span<const std::uint8_t> choice_bits,
                                          wire::CountingChannel& ch, crypto::RandomSource& rng,
                                          const SessionId& session);

}  // namespace escot
