#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "escot/errors.hpp"

// Thin RAII wrappers over libcrypto: Z_p big numbers, SHA-256, AES-GCM
// sealing, and deterministic/system randomness. All protocol logic lives
// in the modules above this one.

typedef struct bignum_st BIGNUM;
typedef struct evp_cipher_ctx_st EVP_CIPHER_CTX;

namespace escot::crypto {

using Sha256Digest = std::array<std::uint8_t, 32>;

// One-shot SHA-256 over the concatenation of the given parts.
// Reuses a thread-local digest context; ~100ns per short input.
Sha256Digest sha256(std::initializer_list<std::span<const std::uint8_t>> parts);
Sha256Digest sha256(std::span<const std::uint8_t> data);

class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
  std::uint64_t next_u64();
};

// OS-backed randomness (RAND_bytes).
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// AES-128-CTR keystream; used both as the deterministic test RNG and as
// the column-stream PRG of the OT extension (keyed from a seed).
class KeyStream {
 public:
  explicit KeyStream(std::span<const std::uint8_t> seed);
  KeyStream(KeyStream&&) noexcept;
  KeyStream& operator=(KeyStream&&) noexcept;
  ~KeyStream();

  void next_bytes(std::span<std::uint8_t> out);
  std::uint64_t bytes_generated() const { return generated_; }

 private:
  EVP_CIPHER_CTX* ctx_ = nullptr;
  std::uint64_t generated_ = 0;
};

class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed);
  void fill(std::span<std::uint8_t> out) override;

 private:
  KeyStream stream_;
};

// AES-256-GCM. Output layout: iv(12) || ciphertext || tag(16).
std::vector<std::uint8_t> aead_seal(const Sha256Digest& key, std::span<const std::uint8_t> plaintext,
                                    RandomSource& rng);
// Throws AuthFailure on tag mismatch or malformed input.
std::vector<std::uint8_t> aead_open(const Sha256Digest& key, std::span<const std::uint8_t> sealed);

// Value-semantic wrapper around BIGNUM, enough for Z_p* arithmetic.
class Bignum {
 public:
  Bignum();                      // zero
  Bignum(std::uint64_t value);   // NOLINT: implicit for literals in tests
  Bignum(const Bignum& other);
  Bignum(Bignum&& other) noexcept;
  Bignum& operator=(const Bignum& other);
  Bignum& operator=(Bignum&& other) noexcept;
  ~Bignum();

  static Bignum from_hex(const std::string& hex);
  static Bignum from_bytes(std::span<const std::uint8_t> be_bytes);
  // Fixed-width big-endian serialization (left-padded with zeros).
  std::vector<std::uint8_t> to_bytes(std::size_t width) const;

  static Bignum mod_exp(const Bignum& base, const Bignum& exp, const Bignum& mod);
  static Bignum mod_mul(const Bignum& a, const Bignum& b, const Bignum& mod);
  static Bignum mod_inverse(const Bignum& a, const Bignum& mod);
  static Bignum sub(const Bignum& a, const Bignum& b);

  // Uniform in [1, upper-1].
  static Bignum random_below(const Bignum& upper, RandomSource& rng);

  int compare(const Bignum& other) const;
  bool operator==(const Bignum& other) const { return compare(other) == 0; }
  bool is_zero() const;
  bool is_one() const;
  std::size_t byte_length() const;
  std::uint64_t to_u64() const;
  std::string to_hex() const;

  const BIGNUM* raw() const { return bn_; }

 private:
  BIGNUM* bn_;
};

}  // namespace escot::crypto
