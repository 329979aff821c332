#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <future>
#include <random>

#include "escot/base_ot.hpp"
#include "escot/wire.hpp"

using namespace escot;
using crypto::Bignum;

namespace {

// Independent modular-exponentiation oracle (schoolbook square-and-multiply
// on machine words; toy group only).
std::uint64_t modexp_oracle(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t result = 1 % mod;
  base %= mod;
  while (exp) {
    if (exp & 1) result = result * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return result;
}

const SessionId kSession = {1, 2, 3, 4, 5, 6, 7, 8};

}  // namespace

TEST_CASE("toy-group vectors reproduce the hand-computed values") {
  GroupParams toy = GroupParams::toy();

  // sender: a=6 -> A = 5^6 mod 23 = 8
  CHECK(modexp_oracle(5, 6, 23) == 8);
  auto sender = base_ot_sender_round1_with(toy, Bignum(6));
  CHECK(sender.big_a.to_u64() == 8);

  SUBCASE("r=0: B = g^b = 10, shared value 6 on both sides") {
    CHECK(modexp_oracle(5, 3, 23) == 10);
    CHECK(modexp_oracle(8, 3, 23) == 6);   // receiver: A^b
    CHECK(modexp_oracle(10, 6, 23) == 6);  // sender: B^a
    auto receiver = base_ot_receiver_round2_with(toy, sender.big_a, 0, Bignum(3), kSession, 0);
    CHECK(receiver.big_b.to_u64() == 10);
    CHECK(receiver.shared.to_u64() == 6);

    auto keys = derive_sender_keys(toy, sender, receiver.big_b, kSession, 0);
    CHECK(keys.shared0.to_u64() == 6);
    CHECK(keys.key0 == receiver.key);
    CHECK(keys.key1 != receiver.key);
  }

  SUBCASE("r=1: B = A*g^b = 11, sender recovers 6 via the inverse of A") {
    // 8^{-1} mod 23 = 3; (11*3 mod 23)^6 = 10^6 mod 23 = 6
    CHECK(8 * 3 % 23 == 1);
    CHECK(modexp_oracle(11 * 3 % 23, 6, 23) == 6);
    auto receiver = base_ot_receiver_round2_with(toy, sender.big_a, 1, Bignum(3), kSession, 0);
    CHECK(receiver.big_b.to_u64() == 11);
    CHECK(receiver.shared.to_u64() == 6);

    auto keys = derive_sender_keys(toy, sender, receiver.big_b, kSession, 0);
    CHECK(keys.shared1.to_u64() == 6);
    CHECK(keys.key1 == receiver.key);
    CHECK(keys.key0 != receiver.key);
  }
}

TEST_CASE("full toy transfers deliver exactly x_r") {
  GroupParams toy = GroupParams::toy();
  crypto::SeededRandom rng(99);
  std::vector<std::uint8_t> x0 = {0xAB}, x1 = {0xCD};

  for (std::uint8_t r : {0, 1}) {
    auto sender = base_ot_sender_round1(toy, rng);
    auto receiver = base_ot_receiver_round2(toy, sender.big_a, r, rng, kSession, r);
    auto cts = base_ot_sender_round3(toy, sender, receiver.big_b, x0, x1, rng, kSession, r);
    auto got = base_ot_receiver_finish(receiver, cts);
    CHECK(got == (r == 0 ? x0 : x1));
  }
}

TEST_CASE("tampered ciphertext fails authentication") {
  GroupParams toy = GroupParams::toy();
  crypto::SeededRandom rng(7);
  std::vector<std::uint8_t> x0 = {0x01, 0x02}, x1 = {0x03, 0x04};
  auto sender = base_ot_sender_round1(toy, rng);
  auto receiver = base_ot_receiver_round2(toy, sender.big_a, 0, rng, kSession, 0);
  auto cts = base_ot_sender_round3(toy, sender, receiver.big_b, x0, x1, rng, kSession, 0);
  cts.e0[cts.e0.size() / 2] ^= 0x80;
  CHECK_THROWS_AS(base_ot_receiver_finish(receiver, cts), AuthFailure);
}

TEST_CASE("group element validation rejects degenerate and foreign elements") {
  const GroupParams& group = GroupParams::modp(1024);
  CHECK_THROWS_AS(validate_group_element(group, Bignum(0)), InvalidGroupElement);
  CHECK_THROWS_AS(validate_group_element(group, Bignum(1)), InvalidGroupElement);
  CHECK_THROWS_AS(validate_group_element(group, Bignum::sub(group.p, Bignum(1))),
                  InvalidGroupElement);
  // g generates the quadratic residues; a non-residue must fail. For these
  // safe primes -1 is a non-residue, so -x is one whenever x is a residue.
  Bignum residue = Bignum::mod_exp(group.g, Bignum(12345), group.p);
  CHECK_NOTHROW(validate_group_element(group, residue));
  Bignum non_residue = Bignum::sub(group.p, residue);
  CHECK_THROWS_AS(validate_group_element(group, non_residue), InvalidGroupElement);

  GroupParams toy = GroupParams::toy();
  CHECK_THROWS_AS(validate_group_element(toy, Bignum(0)), InvalidGroupElement);
  CHECK_THROWS_AS(validate_group_element(toy, Bignum(1)), InvalidGroupElement);
  CHECK_THROWS_AS(validate_group_element(toy, Bignum(22)), InvalidGroupElement);
  CHECK_NOTHROW(validate_group_element(toy, Bignum(8)));
}

TEST_CASE("receiver refuses a degenerate A") {
  GroupParams toy = GroupParams::toy();
  crypto::SeededRandom rng(1);
  CHECK_THROWS_AS(base_ot_receiver_round2(toy, Bignum(1), 0, rng, kSession, 0),
                  InvalidGroupElement);
}

TEST_CASE("exponent bounds are enforced") {
  GroupParams toy = GroupParams::toy();
  CHECK_THROWS_AS(base_ot_sender_round1_with(toy, Bignum(0)), InvalidParameter);
  CHECK_THROWS_AS(base_ot_sender_round1_with(toy, Bignum(22)), InvalidParameter);
  CHECK_NOTHROW(base_ot_sender_round1_with(toy, Bignum(21)));
}

TEST_CASE("sampled exponents give distinct public values") {
  GroupParams toy = GroupParams::toy();
  crypto::SeededRandom rng(2024);
  auto s1 = base_ot_sender_round1(toy, rng);
  auto s2 = base_ot_sender_round1(toy, rng);
  CHECK(!(s1.big_a == s2.big_a));  // 1/22 collision chance would need resampling
  CHECK_FALSE(s1.big_a.is_one());
}

TEST_CASE("randomized 1024-bit transfers recover x_r with agreeing keys") {
  const GroupParams& group = GroupParams::modp(1024);
  crypto::SeededRandom rng(31337);
  std::mt19937 coin(555);
  for (int trial = 0; trial < 40; ++trial) {
    std::uint8_t r = coin() & 1;
    std::vector<std::uint8_t> x0(10), x1(10);
    rng.fill(x0);
    rng.fill(x1);
    auto sender = base_ot_sender_round1(group, rng);
    auto receiver =
        base_ot_receiver_round2(group, sender.big_a, r, rng, kSession, static_cast<std::uint32_t>(trial));
    auto keys = derive_sender_keys(group, sender, receiver.big_b, kSession,
                                   static_cast<std::uint32_t>(trial));
    CHECK((r == 0 ? keys.key0 : keys.key1) == receiver.key);
    CHECK((r == 0 ? keys.key1 : keys.key0) != receiver.key);
    auto cts = base_ot_sender_round3(group, sender, receiver.big_b, x0, x1, rng, kSession,
                                     static_cast<std::uint32_t>(trial));
    CHECK(base_ot_receiver_finish(receiver, cts) == (r == 0 ? x0 : x1));
  }
}

TEST_CASE("batched base OTs deliver the chosen seeds over a channel") {
  const GroupParams& group = GroupParams::modp(1024);
  const std::uint32_t kappa = 80;

  auto [client_end, server_end] = wire::make_pipe();
  wire::CountingChannel client_ch(*client_end);
  wire::CountingChannel server_ch(*server_end);

  std::mt19937 coin(4242);
  std::vector<std::uint8_t> choices(kappa);
  for (auto& c : choices) c = coin() & 1;

  auto sender_future = std::async(std::launch::async, [&] {
    crypto::SeededRandom rng(1);
    return run_base_ots_sender(group, kappa, client_ch, rng, kSession);
  });
  crypto::SeededRandom rng(2);
  BaseOtReceiverBatch receiver = run_base_ots_receiver(group, kappa, choices, server_ch, rng, kSession);
  BaseOtSenderBatch sender = sender_future.get();

  REQUIRE(sender.kappa == kappa);
  REQUIRE(receiver.kappa == kappa);
  CHECK(sender.seed_bytes == kappa / 8);
  CHECK(sender.seeds0.size() == kappa * sender.seed_bytes);
  CHECK(sender.seeds1.size() == kappa * sender.seed_bytes);
  CHECK(receiver.seeds.size() == kappa * receiver.seed_bytes);

  for (std::uint32_t i = 0; i < kappa; ++i) {
    auto expected = choices[i] == 0 ? sender.seed0(i) : sender.seed1(i);
    CHECK(std::equal(expected.begin(), expected.end(), receiver.seed(i).begin()));
  }

  // payload accounting: A and B are kappa*phi bits each; both ends count
  // both directions plus the ciphertext batch
  const std::uint64_t element_bits = static_cast<std::uint64_t>(kappa) * 1024;
  CHECK(client_ch.payload_bits() == server_ch.payload_bits());
  CHECK(client_ch.payload_bits() > 2 * element_bits);
  CHECK(client_ch.bytes_out() == server_ch.bytes_in());
  CHECK(client_ch.bytes_in() == server_ch.bytes_out());
}

TEST_CASE("kappa=128 batches hold 128 receiver keys and 256 sender seeds") {
  const GroupParams& group = GroupParams::modp(1024);
  const std::uint32_t kappa = 128;
  auto [client_end, server_end] = wire::make_pipe();
  wire::CountingChannel client_ch(*client_end);
  wire::CountingChannel server_ch(*server_end);
  std::vector<std::uint8_t> choices(kappa, 1);

  auto sender_future = std::async(std::launch::async, [&] {
    crypto::SeededRandom rng(11);
    return run_base_ots_sender(group, kappa, client_ch, rng, kSession);
  });
  crypto::SeededRandom rng(12);
  auto receiver = run_base_ots_receiver(group, kappa, choices, server_ch, rng, kSession);
  auto sender = sender_future.get();

  CHECK(receiver.seeds.size() / receiver.seed_bytes == 128);   // one key per OT
  CHECK((sender.seeds0.size() + sender.seeds1.size()) / sender.seed_bytes == 256);  // two per OT
  CHECK(sender.seed_bytes == 16);
}

TEST_CASE("2048-bit group batch agrees end to end") {
  const GroupParams& group = GroupParams::modp(2048);
  const std::uint32_t kappa = 80;
  auto [client_end, server_end] = wire::make_pipe();
  wire::CountingChannel client_ch(*client_end);
  wire::CountingChannel server_ch(*server_end);
  std::vector<std::uint8_t> choices(kappa);
  for (std::size_t i = 0; i < kappa; ++i) choices[i] = i & 1;

  auto sender_future = std::async(std::launch::async, [&] {
    crypto::SeededRandom rng(21);
    return run_base_ots_sender(group, kappa, client_ch, rng, kSession);
  });
  crypto::SeededRandom rng(22);
  auto receiver = run_base_ots_receiver(group, kappa, choices, server_ch, rng, kSession);
  auto sender = sender_future.get();
  for (std::uint32_t i = 0; i < kappa; ++i) {
    auto expected = choices[i] == 0 ? sender.seed0(i) : sender.seed1(i);
    CHECK(std::equal(expected.begin(), expected.end(), receiver.seed(i).begin()));
  }
  // group elements are 256 bytes each on the wire at phi=2048
  CHECK(client_ch.payload_bits() > 2ull * kappa * 2048);
}

TEST_CASE("kappa outside {80,128} is refused") {
  const GroupParams& group = GroupParams::modp(1024);
  auto [a, b] = wire::make_pipe();
  wire::CountingChannel ch(*a);
  crypto::SeededRandom rng(3);
  CHECK_THROWS_AS(run_base_ots_sender(group, 0, ch, rng, kSession), InvalidParameter);
  CHECK_THROWS_AS(run_base_ots_sender(group, 64, ch, rng, kSession), InvalidParameter);
}

TEST_CASE("modp group self-checks") {
  for (std::uint32_t phi : {1024u, 2048u}) {
    const GroupParams& group = GroupParams::modp(phi);
    CHECK(group.p.byte_length() == phi / 8);
    // g^q == 1: g generates the order-q subgroup
    CHECK(crypto::Bignum::mod_exp(group.g, group.q, group.p).is_one());
  }
  CHECK_THROWS_AS(GroupParams::modp(512), InvalidParameter);
}
