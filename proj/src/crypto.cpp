#include "escot/crypto.hpp"

#include <openssl/bn.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <cstring>

namespace escot::crypto {

namespace {

struct DigestCtx {
  EVP_MD_CTX* ctx;
  EVP_MD* md;
  DigestCtx() {
    md = EVP_MD_fetch(nullptr, "SHA256", nullptr);
    ctx = EVP_MD_CTX_new();
    if (!md || !ctx) throw Error("SHA-256 unavailable");
  }
  ~DigestCtx() {
    EVP_MD_CTX_free(ctx);
    EVP_MD_free(md);
  }
};

DigestCtx& thread_digest() {
  thread_local DigestCtx dc;
  return dc;
}

}  // namespace

Sha256Digest sha256(std::initializer_list<std::span<const std::uint8_t>> parts) {
  auto& dc = thread_digest();
  Sha256Digest out;
  unsigned int len = 0;
  if (EVP_DigestInit_ex2(dc.ctx, dc.md, nullptr) != 1) throw Error("digest init failed");
  for (const auto& part : parts) {
    if (!part.empty() && EVP_DigestUpdate(dc.ctx, part.data(), part.size()) != 1)
      throw Error("digest update failed");
  }
  if (EVP_DigestFinal_ex(dc.ctx, out.data(), &len) != 1 || len != out.size())
    throw Error("digest final failed");
  return out;
}

Sha256Digest sha256(std::span<const std::uint8_t> data) { return sha256({data}); }

std::uint64_t RandomSource::next_u64() {
  std::uint8_t buf[8];
  fill(buf);
  std::uint64_t v = 0;
  for (auto b : buf) v = (v << 8) | b;
  return v;
}

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (!out.empty() && RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
    throw Error("system RNG failure");
}

KeyStream::KeyStream(std::span<const std::uint8_t> seed) {
  static const std::uint8_t label[] = {'p', 'r', 'g', '/', 'v', '1'};
  Sha256Digest k = sha256({std::span<const std::uint8_t>(label, sizeof label), seed});
  std::uint8_t iv[16] = {0};
  ctx_ = EVP_CIPHER_CTX_new();
  if (!ctx_ || EVP_EncryptInit_ex(ctx_, EVP_aes_128_ctr(), nullptr, k.data(), iv) != 1)
    throw Error("keystream init failed");
}

KeyStream::KeyStream(KeyStream&& other) noexcept : ctx_(other.ctx_), generated_(other.generated_) {
  other.ctx_ = nullptr;
}

KeyStream& KeyStream::operator=(KeyStream&& other) noexcept {
  if (this != &other) {
    EVP_CIPHER_CTX_free(ctx_);
    ctx_ = other.ctx_;
    generated_ = other.generated_;
    other.ctx_ = nullptr;
  }
  return *this;
}

KeyStream::~KeyStream() { EVP_CIPHER_CTX_free(ctx_); }

void KeyStream::next_bytes(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  std::memset(out.data(), 0, out.size());
  int outl = 0;
  if (EVP_EncryptUpdate(ctx_, out.data(), &outl, out.data(), static_cast<int>(out.size())) != 1 ||
      outl != static_cast<int>(out.size()))
    throw Error("keystream update failed");
  generated_ += out.size();
}

SeededRandom::SeededRandom(std::uint64_t seed)
    : stream_([&] {
        std::uint8_t buf[8];
        for (int i = 7; i >= 0; --i, seed >>= 8) buf[i] = static_cast<std::uint8_t>(seed & 0xFF);
        return KeyStream(buf);
      }()) {}

void SeededRandom::fill(std::span<std::uint8_t> out) { stream_.next_bytes(out); }

std::vector<std::uint8_t> aead_seal(const Sha256Digest& key, std::span<const std::uint8_t> plaintext,
                                    RandomSource& rng) {
  std::vector<std::uint8_t> out(12 + plaintext.size() + 16);
  rng.fill(std::span(out.data(), 12));
  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  if (!ctx) throw Error("cipher ctx alloc failed");
  int outl = 0;
  bool ok = EVP_EncryptInit_ex(ctx, EVP_aes_256_gcm(), nullptr, key.data(), out.data()) == 1 &&
            (plaintext.empty() ||
             EVP_EncryptUpdate(ctx, out.data() + 12, &outl, plaintext.data(),
                               static_cast<int>(plaintext.size())) == 1) &&
            EVP_EncryptFinal_ex(ctx, out.data() + 12 + outl, &outl) == 1 &&
            EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_GET_TAG, 16, out.data() + 12 + plaintext.size()) == 1;
  EVP_CIPHER_CTX_free(ctx);
  if (!ok) throw Error("seal failed");
  return out;
}

std::vector<std::uint8_t> aead_open(const Sha256Digest& key, std::span<const std::uint8_t> sealed) {
  if (sealed.size() < 12 + 16) throw AuthFailure("ciphertext too short");
  const std::size_t ptlen = sealed.size() - 12 - 16;
  std::vector<std::uint8_t> out(ptlen);
  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  if (!ctx) throw Error("cipher ctx alloc failed");
  std::uint8_t tag[16];
  std::memcpy(tag, sealed.data() + 12 + ptlen, 16);
  int outl = 0, finl = 0;
  bool ok = EVP_DecryptInit_ex(ctx, EVP_aes_256_gcm(), nullptr, key.data(), sealed.data()) == 1 &&
            (ptlen == 0 ||
             EVP_DecryptUpdate(ctx, out.data(), &outl, sealed.data() + 12, static_cast<int>(ptlen)) == 1) &&
            EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_SET_TAG, 16, tag) == 1 &&
            EVP_DecryptFinal_ex(ctx, out.data() + outl, &finl) == 1;
  EVP_CIPHER_CTX_free(ctx);
  if (!ok) throw AuthFailure("authenticated decryption failed");
  return out;
}

namespace {
BIGNUM* checked(BIGNUM* bn) {
  if (!bn) throw Error("bignum alloc failed");
  return bn;
}

struct BnCtx {
  BN_CTX* ctx;
  BnCtx() : ctx(BN_CTX_new()) {
    if (!ctx) throw Error("BN_CTX alloc failed");
  }
  ~BnCtx() { BN_CTX_free(ctx); }
};
}  // namespace

Bignum::Bignum() : bn_(checked(BN_new())) { BN_zero(bn_); }

Bignum::Bignum(std::uint64_t value) : bn_(checked(BN_new())) {
  if (BN_set_word(bn_, value) != 1) throw Error("BN_set_word failed");
}

Bignum::Bignum(const Bignum& other) : bn_(checked(BN_dup(other.bn_))) {}

Bignum::Bignum(Bignum&& other) noexcept : bn_(other.bn_) { other.bn_ = nullptr; }

Bignum& Bignum::operator=(const Bignum& other) {
  if (this != &other) {
    if (!BN_copy(bn_, other.bn_)) throw Error("BN_copy failed");
  }
  return *this;
}

Bignum& Bignum::operator=(Bignum&& other) noexcept {
  if (this != &other) {
    BN_free(bn_);
    bn_ = other.bn_;
    other.bn_ = nullptr;
  }
  return *this;
}

Bignum::~Bignum() { BN_free(bn_); }

Bignum Bignum::from_hex(const std::string& hex) {
  Bignum r;
  BIGNUM* p = r.bn_;
  if (BN_hex2bn(&p, hex.c_str()) == 0) throw Error("invalid hex bignum");
  r.bn_ = p;
  return r;
}

Bignum Bignum::from_bytes(std::span<const std::uint8_t> be_bytes) {
  Bignum r;
  if (!BN_bin2bn(be_bytes.data(), static_cast<int>(be_bytes.size()), r.bn_))
    throw Error("BN_bin2bn failed");
  return r;
}

std::vector<std::uint8_t> Bignum::to_bytes(std::size_t width) const {
  std::vector<std::uint8_t> out(width);
  if (BN_bn2binpad(bn_, out.data(), static_cast<int>(width)) < 0)
    throw Error("value wider than requested serialization width");
  return out;
}

Bignum Bignum::mod_exp(const Bignum& base, const Bignum& exp, const Bignum& mod) {
  BnCtx c;
  Bignum r;
  if (BN_mod_exp(r.bn_, base.bn_, exp.bn_, mod.bn_, c.ctx) != 1) throw Error("mod_exp failed");
  return r;
}

Bignum Bignum::mod_mul(const Bignum& a, const Bignum& b, const Bignum& mod) {
  BnCtx c;
  Bignum r;
  if (BN_mod_mul(r.bn_, a.bn_, b.bn_, mod.bn_, c.ctx) != 1) throw Error("mod_mul failed");
  return r;
}

Bignum Bignum::mod_inverse(const Bignum& a, const Bignum& mod) {
  BnCtx c;
  Bignum r;
  if (!BN_mod_inverse(r.bn_, a.bn_, mod.bn_, c.ctx)) throw Error("element not invertible");
  return r;
}

Bignum Bignum::sub(const Bignum& a, const Bignum& b) {
  Bignum r;
  if (BN_sub(r.bn_, a.bn_, b.bn_) != 1) throw Error("BN_sub failed");
  return r;
}

Bignum Bignum::random_below(const Bignum& upper, RandomSource& rng) {
  // Rejection sampling over fixed-width strings keeps the draw uniform and
  // deterministic for a given RandomSource byte stream.
  const std::size_t width = upper.byte_length();
  if (width == 0) throw InvalidParameter("random_below: zero upper bound");
  std::vector<std::uint8_t> buf(width);
  for (;;) {
    rng.fill(buf);
    Bignum candidate = from_bytes(buf);
    if (!candidate.is_zero() && candidate.compare(upper) < 0) return candidate;
  }
}

int Bignum::compare(const Bignum& other) const { return BN_cmp(bn_, other.bn_); }

bool Bignum::is_zero() const { return BN_is_zero(bn_); }

bool Bignum::is_one() const { return BN_is_one(bn_); }

std::size_t Bignum::byte_length() const { return static_cast<std::size_t>(BN_num_bytes(bn_)); }

std::uint64_t Bignum::to_u64() const {
  BN_ULONG w = BN_get_word(bn_);
  return static_cast<std::uint64_t>(w);
}

std::string Bignum::to_hex() const {
  char* h = BN_bn2hex(bn_);
  if (!h) throw Error("BN_bn2hex failed");
  std::string s(h);
  OPENSSL_free(h);
  return s;
}

}  // namespace escot::crypto
