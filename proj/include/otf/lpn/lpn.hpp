#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include "otf/lpn/bit_matrix.hpp"
#include "otf/pke.hpp"

namespace otf::lpn {

/// A in F2^{l1 x n}, T in F2^{l2 x l1}, X in F2^{l2 x n}; messages of
/// `message_bits` bits are encoded with a `repetition`-fold repetition code,
/// so l2 = message_bits * repetition.
struct LpnParams {
  CommonParams common;
  std::uint32_t n;
  std::uint32_t l1;
  std::uint32_t message_bits;
  std::uint32_t repetition;  // odd, so majority votes never tie
  Rate rho;
  // Decryption reports failure when re-encoding leaves more than this
  // fraction of l2 positions in disagreement.
  double max_residual_fraction = 0.25;

  [[nodiscard]] std::uint32_t l2() const { return message_bits * repetition; }
};

inline void validate(const LpnParams& p) {
  if (p.n == 0 || p.l1 == 0 || p.message_bits == 0) throw std::invalid_argument("lpn: empty dimension");
  if (p.repetition % 2 == 0) throw std::invalid_argument("lpn: repetition factor must be odd");
  (void)p.rho.threshold();
}

// 32-bit messages keep pk under the 65535-byte envelope while rho * n stays
// large enough that an all-zero s (which decrypts under any key) is rare.
inline LpnParams toy() { return {{BackendId::Lpn, Tier::Toy, 128, 32}, 512, 128, 32, 21, {1, 88}}; }
// Illustrative larger sizing; its failure rate is measured, not claimed.
inline LpnParams medium() { return {{BackendId::Lpn, Tier::Medium, 128, 32}, 384, 384, 128, 7, {1, 256}}; }

inline std::optional<LpnParams> by_tier(Tier tier) {
  if (tier == Tier::Toy) return toy();
  if (tier == Tier::Medium) return medium();
  return std::nullopt;
}

/// Low-noise LPN encryption: pk = (A, B = TA + X), sk = T,
/// ct = (As + e1, Bs + e2 + Gm), decrypt by majority-decoding ct2 - T ct1.
class Lpn {
public:
  struct PublicKey {
    BitMatrix a;
    BitMatrix b;
    friend bool operator==(const PublicKey&, const PublicKey&) = default;
  };
  struct SecretKey {
    BitMatrix t;
    friend bool operator==(const SecretKey&, const SecretKey&) = default;
  };
  struct Plaintext {
    BitMatrix bits;  // 1 x message_bits
    friend bool operator==(const Plaintext&, const Plaintext&) = default;
  };
  struct Ciphertext {
    BitMatrix ct1;  // 1 x l1
    BitMatrix ct2;  // 1 x l2
    friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
  };

  // Randomness retained for tests of the algebraic identities.
  struct KeyTrace {
    BitMatrix x;
  };
  struct EncryptTrace {
    BitMatrix s, e1, e2;
  };

  static constexpr BackendId backend = BackendId::Lpn;

  explicit Lpn(LpnParams params) : params_(params) { validate(params_); }

  [[nodiscard]] CommonParams common() const { return params_.common; }
  [[nodiscard]] const LpnParams& params() const { return params_; }

  std::pair<std::pair<PublicKey, SecretKey>, KeyTrace> keygen_traced(Rng& rng) const {
    const auto& p = params_;
    auto a = BitMatrix::uniform(p.l1, p.n, rng);
    auto t = bernoulli_sample(p.rho, p.l2(), p.l1, rng);
    auto x = bernoulli_sample(p.rho, p.l2(), p.n, rng);
    auto b = t.mul(a) ^ x;
    return {{PublicKey{std::move(a), std::move(b)}, SecretKey{std::move(t)}}, KeyTrace{std::move(x)}};
  }

  std::pair<PublicKey, SecretKey> keygen(Rng& rng) const { return keygen_traced(rng).first; }

  /// G*m for the repetition code: bit i occupies positions [i*rep, (i+1)*rep).
  BitMatrix encode_codeword(const Plaintext& m) const {
    BitMatrix out = BitMatrix::vector(params_.l2());
    for (std::uint32_t i = 0; i < params_.message_bits; ++i)
      if (m.bits[i])
        for (std::uint32_t j = 0; j < params_.repetition; ++j) out.set(i * params_.repetition + j, true);
    return out;
  }

  std::pair<Ciphertext, EncryptTrace> encrypt_traced(const PublicKey& pk, const Plaintext& m, Rng& rng) const {
    const auto& p = params_;
    auto s = bernoulli_sample(p.rho, 1, p.n, rng);
    auto e1 = bernoulli_sample(p.rho, 1, p.l1, rng);
    auto e2 = bernoulli_sample(p.rho, 1, p.l2(), rng);
    Ciphertext ct{pk.a.mul_vec(s) ^ e1, pk.b.mul_vec(s) ^ e2 ^ encode_codeword(m)};
    return {std::move(ct), EncryptTrace{std::move(s), std::move(e1), std::move(e2)}};
  }

  Ciphertext encrypt(const PublicKey& pk, const Plaintext& m, Rng& rng) const {
    return encrypt_traced(pk, m, rng).first;
  }

  /// ct2 - T*ct1 = Gm + (Xs + e2 - T e1).
  BitMatrix noisy_codeword(const SecretKey& sk, const Ciphertext& ct) const {
    return ct.ct2 ^ sk.t.mul_vec(ct.ct1);
  }

  /// Majority vote per repetition block.
  Plaintext majority_decode(const BitMatrix& y) const {
    Plaintext m{BitMatrix::vector(params_.message_bits)};
    for (std::uint32_t i = 0; i < params_.message_bits; ++i) {
      std::uint32_t ones = 0;
      for (std::uint32_t j = 0; j < params_.repetition; ++j) ones += y[i * params_.repetition + j];
      m.bits.set(i, 2 * ones > params_.repetition);
    }
    return m;
  }

  std::optional<Plaintext> decrypt(const SecretKey& sk, const Ciphertext& ct) const {
    auto y = noisy_codeword(sk, ct);
    auto m = majority_decode(y);
    const auto residual = (y ^ encode_codeword(m)).weight();
    if (static_cast<double>(residual) > params_.max_residual_fraction * params_.l2()) return std::nullopt;
    return m;
  }

  PublicKey pk_op(const PublicKey& x, const PublicKey& y) const { return {x.a ^ y.a, x.b ^ y.b}; }
  PublicKey pk_inv(const PublicKey& x) const { return x; }
  PublicKey pk_identity() const {
    return {BitMatrix(params_.l1, params_.n), BitMatrix(params_.l2(), params_.n)};
  }

  [[nodiscard]] std::size_t uniform_width() const { return a_bytes() + b_bytes(); }
  PublicKey pk_from_uniform(ByteView bytes) const {
    if (bytes.size() != uniform_width()) throw std::invalid_argument("pk_from_uniform: wrong input width");
    return {BitMatrix::unpack_bits(params_.l1, params_.n, bytes.first(a_bytes()), false),
            BitMatrix::unpack_bits(params_.l2(), params_.n, bytes.subspan(a_bytes()), false)};
  }

  Plaintext sample_plaintext(Rng& rng) const {
    return {BitMatrix::uniform(1, params_.message_bits, rng)};
  }

  Bytes encode(const PublicKey& pk) const { return concat(pk.a.serialize(), pk.b.serialize()); }
  Bytes encode(const SecretKey& sk) const { return sk.t.serialize(); }
  Bytes encode(const Ciphertext& ct) const { return concat(ct.ct1.serialize(), ct.ct2.serialize()); }
  Bytes encode(const Plaintext& pt) const {
    Bytes out;
    pt.bits.pack_bits(out);
    return out;
  }

  PublicKey decode_public_key(ByteView b) const {
    ByteReader rd(b);
    PublicKey pk{BitMatrix::deserialize(rd, params_.l1, params_.n),
                 BitMatrix::deserialize(rd, params_.l2(), params_.n)};
    rd.expect_end();
    return pk;
  }
  SecretKey decode_secret_key(ByteView b) const {
    ByteReader rd(b);
    SecretKey sk{BitMatrix::deserialize(rd, params_.l2(), params_.l1)};
    rd.expect_end();
    return sk;
  }
  Ciphertext decode_ciphertext(ByteView b) const {
    ByteReader rd(b);
    Ciphertext ct{BitMatrix::deserialize(rd, 1, params_.l1), BitMatrix::deserialize(rd, 1, params_.l2())};
    rd.expect_end();
    return ct;
  }
  Plaintext decode_plaintext(ByteView b) const {
    return {BitMatrix::unpack_bits(1, params_.message_bits, b, true)};
  }

private:
  [[nodiscard]] std::size_t a_bytes() const { return (std::size_t{params_.l1} * params_.n + 7) / 8; }
  [[nodiscard]] std::size_t b_bytes() const { return (std::size_t{params_.l2()} * params_.n + 7) / 8; }

  static Bytes concat(Bytes a, const Bytes& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  LpnParams params_;
};

}  // namespace otf::lpn
