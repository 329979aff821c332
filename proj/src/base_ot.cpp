#include "escot/base_ot.hpp"

#include <omp.h>

#include "escot/wire.hpp"

namespace escot {

namespace {

// RFC 2409 Oakley Group 2 (1024-bit) and RFC 3526 Group 14 (2048-bit):
// safe primes with g = 2 generating the order-(p-1)/2 subgroup.
constexpr const char* kModp1024 =
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE65381FFFFFFFFFFFFFFFF";

constexpr const char* kModp2048 =
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
    "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
    "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF";

crypto::Bignum halve(const crypto::Bignum& even) {
  std::size_t width = even.byte_length();
  std::vector<std::uint8_t> bytes = even.to_bytes(width);
  std::uint8_t carry = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    std::uint8_t next_carry = bytes[i] & 1;
    bytes[i] = static_cast<std::uint8_t>((bytes[i] >> 1) | (carry << 7));
    carry = next_carry;
  }
  return crypto::Bignum::from_bytes(bytes);
}

GroupParams make_modp(const char* hex, std::uint32_t phi_bits) {
  crypto::Bignum p = crypto::Bignum::from_hex(hex);
  crypto::Bignum q = halve(crypto::Bignum::sub(p, crypto::Bignum(1)));
  return GroupParams{std::move(p), crypto::Bignum(2), std::move(q), phi_bits};
}

const std::uint8_t kKeyLabel[] = {'b', 'o', 't', '/', 'k', 'e', 'y'};

crypto::Sha256Digest derive_key(const GroupParams& params, const SessionId& session,
                                std::uint32_t index, const crypto::Bignum& big_a,
                                const crypto::Bignum& shared) {
  std::uint8_t idx[4] = {static_cast<std::uint8_t>(index >> 24), static_cast<std::uint8_t>(index >> 16),
                         static_cast<std::uint8_t>(index >> 8), static_cast<std::uint8_t>(index)};
  const std::size_t width = params.p.byte_length();
  std::vector<std::uint8_t> a_bytes = big_a.to_bytes(width);
  std::vector<std::uint8_t> s_bytes = shared.to_bytes(width);
  return crypto::sha256({std::span<const std::uint8_t>(kKeyLabel, sizeof kKeyLabel),
                         std::span<const std::uint8_t>(session.data(), session.size()),
                         std::span<const std::uint8_t>(idx, 4), a_bytes, s_bytes});
}

}  // namespace

const GroupParams& GroupParams::modp(std::uint32_t phi_bits) {
  static const GroupParams g1024 = make_modp(kModp1024, 1024);
  static const GroupParams g2048 = make_modp(kModp2048, 2048);
  switch (phi_bits) {
    case 1024: return g1024;
    case 2048: return g2048;
    default: throw InvalidParameter("phi must be 1024 or 2048");
  }
}

GroupParams GroupParams::toy() {
  // g=5 has full order 22 in Z_23*, so only {0,1,22} fail membership.
  return GroupParams{crypto::Bignum(23), crypto::Bignum(5), crypto::Bignum(22), 8};
}

void validate_group_element(const GroupParams& params, const crypto::Bignum& element) {
  crypto::Bignum p_minus_1 = crypto::Bignum::sub(params.p, crypto::Bignum(1));
  if (element.is_zero() || element.is_one() || element.compare(p_minus_1) >= 0)
    throw InvalidGroupElement("degenerate group element");
  if (!crypto::Bignum::mod_exp(element, params.q, params.p).is_one())
    throw InvalidGroupElement("element outside the order-q subgroup");
}

BaseOtSenderState base_ot_sender_round1(const GroupParams& params, crypto::RandomSource& rng) {
  for (;;) {
    crypto::Bignum a = crypto::Bignum::random_below(params.q, rng);
    crypto::Bignum big_a = crypto::Bignum::mod_exp(params.g, a, params.p);
    if (big_a.is_one()) continue;  // degenerate exponent, resample
    return BaseOtSenderState{std::move(a), std::move(big_a)};
  }
}

BaseOtSenderState base_ot_sender_round1_with(const GroupParams& params, crypto::Bignum a) {
  if (a.is_zero() || a.compare(params.q) >= 0) throw InvalidParameter("exponent outside [1, q-1]");
  crypto::Bignum big_a = crypto::Bignum::mod_exp(params.g, a, params.p);
  return BaseOtSenderState{std::move(a), std::move(big_a)};
}

BaseOtReceiverState base_ot_receiver_round2_with(const GroupParams& params,
                                                 const crypto::Bignum& big_a, std::uint8_t r,
                                                 crypto::Bignum b, const SessionId& session,
                                                 std::uint32_t index) {
  if (r > 1) throw InvalidParameter("selection bit must be 0 or 1");
  validate_group_element(params, big_a);
  crypto::Bignum g_b = crypto::Bignum::mod_exp(params.g, b, params.p);
  crypto::Bignum big_b = r == 0 ? g_b : crypto::Bignum::mod_mul(big_a, g_b, params.p);
  crypto::Bignum shared = crypto::Bignum::mod_exp(big_a, b, params.p);
  crypto::Sha256Digest key = derive_key(params, session, index, big_a, shared);
  return BaseOtReceiverState{std::move(b), r, std::move(big_b), std::move(shared), key};
}

BaseOtReceiverState base_ot_receiver_round2(const GroupParams& params, const crypto::Bignum& big_a,
                                            std::uint8_t r, crypto::RandomSource& rng,
                                            const SessionId& session, std::uint32_t index) {
  for (;;) {
    crypto::Bignum b = crypto::Bignum::random_below(params.q, rng);
    if (crypto::Bignum::mod_exp(params.g, b, params.p).is_one()) continue;
    return base_ot_receiver_round2_with(params, big_a, r, std::move(b), session, index);
  }
}

SenderKeys derive_sender_keys(const GroupParams& params, const BaseOtSenderState& state,
                              const crypto::Bignum& big_b, const SessionId& session,
                              std::uint32_t index) {
  validate_group_element(params, big_b);
  crypto::Bignum shared0 = crypto::Bignum::mod_exp(big_b, state.a, params.p);
  crypto::Bignum a_inv = crypto::Bignum::mod_inverse(state.big_a, params.p);
  crypto::Bignum b_over_a = crypto::Bignum::mod_mul(big_b, a_inv, params.p);
  crypto::Bignum shared1 = crypto::Bignum::mod_exp(b_over_a, state.a, params.p);
  crypto::Sha256Digest key0 = derive_key(params, session, index, state.big_a, shared0);
  crypto::Sha256Digest key1 = derive_key(params, session, index, state.big_a, shared1);
  return SenderKeys{std::move(shared0), std::move(shared1), key0, key1};
}

CipherPair base_ot_sender_round3(const GroupParams& params, const BaseOtSenderState& state,
                                 const crypto::Bignum& big_b, std::span<const std::uint8_t> x0,
                                 std::span<const std::uint8_t> x1, crypto::RandomSource& rng,
                                 const SessionId& session, std::uint32_t index) {
  SenderKeys keys = derive_sender_keys(params, state, big_b, session, index);
  return CipherPair{crypto::aead_seal(keys.key0, x0, rng), crypto::aead_seal(keys.key1, x1, rng)};
}

std::vector<std::uint8_t> base_ot_receiver_finish(const BaseOtReceiverState& state,
                                                  const CipherPair& ciphertexts) {
  return crypto::aead_open(state.key, state.r == 0 ? ciphertexts.e0 : ciphertexts.e1);
}

namespace {

void check_kappa(std::uint32_t kappa) {
  if (kappa != 80 && kappa != 128) throw InvalidParameter("kappa must be 80 or 128");
}

}  // namespace

BaseOtSenderBatch run_base_ots_sender(const GroupParams& params, std::uint32_t kappa,
                                      wire::CountingChannel& ch, crypto::RandomSource& rng,
                                      const SessionId& session) {
  check_kappa(kappa);
  const std::size_t elem = params.element_bytes();
  const std::size_t seed_bytes = kappa / 8;

  BaseOtSenderBatch batch;
  batch.kappa = kappa;
  batch.seed_bytes = seed_bytes;
  batch.seeds0.resize(kappa * seed_bytes);
  batch.seeds1.resize(kappa * seed_bytes);
  rng.fill(batch.seeds0);
  rng.fill(batch.seeds1);

  // Exponents drawn serially (deterministic under a seeded RNG), group
  // exponentiations spread across threads.
  std::vector<crypto::Bignum> exponents;
  exponents.reserve(kappa);
  for (std::uint32_t i = 0; i < kappa; ++i)
    exponents.push_back(crypto::Bignum::random_below(params.q, rng));

  std::vector<BaseOtSenderState> states(kappa);
  std::exception_ptr round1_failure;
#pragma omp parallel for schedule(dynamic)
  for (std::uint32_t i = 0; i < kappa; ++i) {
    try {
      states[i] = base_ot_sender_round1_with(params, exponents[i]);
    } catch (...) {
#pragma omp critical
      if (!round1_failure) round1_failure = std::current_exception();
    }
  }
  if (round1_failure) std::rethrow_exception(round1_failure);

  wire::PayloadWriter a_frame;
  a_frame.u16(static_cast<std::uint16_t>(kappa));
  for (const auto& st : states) a_frame.bytes(st.big_a.to_bytes(elem));
  wire::write_frame(ch, wire::FrameType::BaseOtA, a_frame.data());
  ch.flush();
  ch.add_payload_bits(static_cast<std::uint64_t>(kappa) * elem * 8);

  wire::Frame b_frame = wire::expect_frame(ch, wire::FrameType::BaseOtB);
  wire::PayloadReader b_reader(b_frame.payload);
  if (b_reader.u16() != kappa) throw ProtocolError("base-OT count mismatch");
  std::vector<crypto::Bignum> big_bs;
  big_bs.reserve(kappa);
  for (std::uint32_t i = 0; i < kappa; ++i)
    big_bs.push_back(crypto::Bignum::from_bytes(b_reader.bytes(elem)));
  b_reader.expect_done();
  ch.add_payload_bits(static_cast<std::uint64_t>(kappa) * elem * 8);

  std::vector<SenderKeys> keys(kappa);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::uint32_t i = 0; i < kappa; ++i) {
    try {
      keys[i] = derive_sender_keys(params, states[i], big_bs[i], session, i);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  wire::PayloadWriter ct_frame;
  ct_frame.u16(static_cast<std::uint16_t>(kappa));
  std::uint64_t ct_bits = 0;
  for (std::uint32_t i = 0; i < kappa; ++i) {
    auto e0 = crypto::aead_seal(keys[i].key0, batch.seed0(i), rng);
    auto e1 = crypto::aead_seal(keys[i].key1, batch.seed1(i), rng);
    ct_bits += (e0.size() + e1.size()) * 8;
    ct_frame.bytes16(e0);
    ct_frame.bytes16(e1);
  }
  wire::write_frame(ch, wire::FrameType::BaseOtCiphertexts, ct_frame.data());
  ch.flush();
  ch.add_payload_bits(ct_bits);
  return batch;
}

BaseOtReceiverBatch run_base_ots_receiver(const GroupParams& params, std::uint32_t kappa,
                                          std::span<const std::uint8_t> choice_bits,
                                          wire::CountingChannel& ch, crypto::RandomSource& rng,
                                          const SessionId& session) {
  check_kappa(kappa);
  if (choice_bits.size() != kappa) throw InvalidParameter("need exactly kappa choice bits");
  const std::size_t elem = params.element_bytes();

  wire::Frame a_frame = wire::expect_frame(ch, wire::FrameType::BaseOtA);
  wire::PayloadReader a_reader(a_frame.payload);
  if (a_reader.u16() != kappa) throw ProtocolError("base-OT count mismatch");
  std::vector<crypto::Bignum> big_as;
  big_as.reserve(kappa);
  for (std::uint32_t i = 0; i < kappa; ++i)
    big_as.push_back(crypto::Bignum::from_bytes(a_reader.bytes(elem)));
  a_reader.expect_done();
  ch.add_payload_bits(static_cast<std::uint64_t>(kappa) * elem * 8);

  std::vector<crypto::Bignum> exponents;
  exponents.reserve(kappa);
  for (std::uint32_t i = 0; i < kappa; ++i)
    exponents.push_back(crypto::Bignum::random_below(params.q, rng));

  std::vector<BaseOtReceiverState> states(kappa);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::uint32_t i = 0; i < kappa; ++i) {
    try {
      states[i] = base_ot_receiver_round2_with(params, big_as[i], choice_bits[i] & 1, exponents[i],
                                               session, i);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  wire::PayloadWriter b_frame;
  b_frame.u16(static_cast<std::uint16_t>(kappa));
  for (const auto& st : states) b_frame.bytes(st.big_b.to_bytes(elem));
  wire::write_frame(ch, wire::FrameType::BaseOtB, b_frame.data());
  ch.flush();
  ch.add_payload_bits(static_cast<std::uint64_t>(kappa) * elem * 8);

  wire::Frame ct_frame = wire::expect_frame(ch, wire::FrameType::BaseOtCiphertexts);
  wire::PayloadReader ct_reader(ct_frame.payload);
  if (ct_reader.u16() != kappa) throw ProtocolError("base-OT count mismatch");

  BaseOtReceiverBatch batch;
  batch.kappa = kappa;
  batch.seed_bytes = kappa / 8;
  batch.choice_bits.assign(choice_bits.begin(), choice_bits.end());
  batch.seeds.resize(kappa * batch.seed_bytes);
  std::uint64_t ct_bits = 0;
  for (std::uint32_t i = 0; i < kappa; ++i) {
    CipherPair pair{ct_reader.bytes16(), ct_reader.bytes16()};
    ct_bits += (pair.e0.size() + pair.e1.size()) * 8;
    std::vector<std::uint8_t> seed = base_ot_receiver_finish(states[i], pair);
    if (seed.size() != batch.seed_bytes) throw ProtocolError("unexpected base-OT seed length");
    std::copy(seed.begin(), seed.end(), batch.seeds.begin() + i * batch.seed_bytes);
  }
  ct_reader.expect_done();
  ch.add_payload_bits(ct_bits);
  return batch;
}

}  // namespace escot
