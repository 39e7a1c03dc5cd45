#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>

#include "otf/pke.hpp"
#include "otf/qcmdpc/circulant.hpp"
#include "otf/qcmdpc/decoder.hpp"
#include "otf/qcmdpc/params.hpp"

namespace otf::qcmdpc {

/// Error vector (e0, e1) in F2^{2r}; index i < r lives in e0, i >= r in e1 at i - r.
struct ErrorVector {
  Support support;  // strictly increasing
  friend bool operator==(const ErrorVector&, const ErrorVector&) = default;
};

inline std::pair<CirculantPoly, CirculantPoly> split(const ErrorVector& e, std::size_t r) {
  CirculantPoly e0(r), e1(r);
  for (auto i : e.support) (i < r ? e0 : e1).flip(i < r ? i : i - r);
  return {std::move(e0), std::move(e1)};
}

inline ErrorVector join(const CirculantPoly& e0, const CirculantPoly& e1) {
  ErrorVector e{e0.support()};
  for (auto i : e1.support()) e.support.push_back(static_cast<std::uint32_t>(i + e0.size()));
  return e;
}

/// Uniform sorted subset of [0, n) of the given size.
inline Support sample_support(std::uint32_t n, std::uint32_t weight, Rng& rng) {
  std::set<std::uint32_t> chosen;
  while (chosen.size() < weight) chosen.insert(static_cast<std::uint32_t>(rng.uniform(n)));
  return {chosen.begin(), chosen.end()};
}

/// QC-MDPC McEliece: secret parity check [cir(f) | cir(g)], public h = f/g,
/// ciphertext (m, m*h) + e with the plaintext carried in the error vector e.
class QcMdpc {
public:
  struct PublicKey {
    CirculantPoly h;
    friend bool operator==(const PublicKey&, const PublicKey&) = default;
  };
  struct SecretKey {
    Support f;
    Support g;
    friend bool operator==(const SecretKey&, const SecretKey&) = default;
  };
  using Plaintext = ErrorVector;
  struct Ciphertext {
    CirculantPoly c0;
    CirculantPoly c1;
    friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
  };

  static constexpr BackendId backend = BackendId::QcMdpc;

  explicit QcMdpc(QcMdpcParams params) : params_(params) { validate(params_); }

  [[nodiscard]] CommonParams common() const { return params_.common; }
  [[nodiscard]] const QcMdpcParams& params() const { return params_; }

  std::pair<PublicKey, SecretKey> keygen(Rng& rng) const {
    const auto r = params_.r;
    for (;;) {
      SecretKey sk{sample_support(r, params_.half_weight(), rng),
                   sample_support(r, params_.half_weight(), rng)};
      auto g_inv = poly_inv(CirculantPoly::from_support(r, sk.g));
      if (!g_inv) continue;
      return {PublicKey{poly_mul_sparse(sk.f, *g_inv)}, std::move(sk)};
    }
  }

  /// Encryption that also hands back the random codeword seed m.
  std::pair<Ciphertext, CirculantPoly> encrypt_retaining(const PublicKey& pk, const ErrorVector& e,
                                                         Rng& rng) const {
    if (e.support.size() != params_.t) throw std::invalid_argument("error vector must have weight t");
    const auto r = params_.r;
    auto m = CirculantPoly::from_uniform_bytes(r, rng.bytes((r + 7) / 8));
    auto [e0, e1] = split(e, r);
    Ciphertext ct{m ^ e0, poly_mul(m, pk.h) ^ e1};
    return {std::move(ct), std::move(m)};
  }

  Ciphertext encrypt(const PublicKey& pk, const Plaintext& e, Rng& rng) const {
    return encrypt_retaining(pk, e, rng).first;
  }

  CirculantPoly syndrome(const SecretKey& sk, const Ciphertext& ct) const {
    return poly_mul_sparse(sk.f, ct.c0) ^ poly_mul_sparse(sk.g, ct.c1);
  }

  DecodeResult decode(const SecretKey& sk, const Ciphertext& ct) const {
    return bit_flip_decode(sk.f, sk.g, syndrome(sk, ct), params_.decoder);
  }

  std::optional<Plaintext> decrypt(const SecretKey& sk, const Ciphertext& ct) const {
    auto res = decode(sk, ct);
    if (!res.converged || res.e0.weight() + res.e1.weight() != params_.t) return std::nullopt;
    return join(res.e0, res.e1);
  }

  PublicKey pk_op(const PublicKey& a, const PublicKey& b) const { return {a.h ^ b.h}; }
  PublicKey pk_inv(const PublicKey& a) const { return a; }
  PublicKey pk_identity() const { return {CirculantPoly(params_.r)}; }

  [[nodiscard]] std::size_t uniform_width() const { return (params_.r + 7) / 8; }
  PublicKey pk_from_uniform(ByteView bytes) const {
    return {CirculantPoly::from_uniform_bytes(params_.r, bytes)};
  }

  Plaintext sample_plaintext(Rng& rng) const { return {sample_support(params_.n(), params_.t, rng)}; }

  Bytes encode(const PublicKey& pk) const { return pk.h.to_bytes(); }
  Bytes encode(const SecretKey& sk) const {
    ByteWriter w;
    for (auto i : sk.f) w.u32(i);
    for (auto i : sk.g) w.u32(i);
    return std::move(w).take();
  }
  // Sorted 4-byte big-endian indices.
  Bytes encode(const Plaintext& e) const {
    ByteWriter w;
    for (auto i : e.support) w.u32(i);
    return std::move(w).take();
  }
  // (c0, c1) as one 2r-bit string, little-endian bit order.
  Bytes encode(const Ciphertext& ct) const {
    const std::size_t r = params_.r;
    Bytes out((2 * r + 7) / 8, 0);
    for (std::size_t i = 0; i < 2 * r; ++i) {
      bool b = i < r ? ct.c0.bit(i) : ct.c1.bit(i - r);
      out[i / 8] |= static_cast<std::uint8_t>(b << (i % 8));
    }
    return out;
  }

  PublicKey decode_public_key(ByteView b) const { return {CirculantPoly::from_bytes(params_.r, b)}; }

  SecretKey decode_secret_key(ByteView b) const {
    const std::uint32_t hw = params_.half_weight();
    if (b.size() != 8u * hw) throw MalformedError("qcmdpc secret key: wrong length");
    ByteReader rd(b);
    SecretKey sk{read_support(rd, hw, params_.r), read_support(rd, hw, params_.r)};
    return sk;
  }

  Plaintext decode_plaintext(ByteView b) const {
    if (b.size() != 4u * params_.t) throw MalformedError("qcmdpc plaintext: wrong length");
    ByteReader rd(b);
    return {read_support(rd, params_.t, params_.n())};
  }

  Ciphertext decode_ciphertext(ByteView b) const {
    const std::size_t r = params_.r;
    if (b.size() != (2 * r + 7) / 8) throw MalformedError("qcmdpc ciphertext: wrong length");
    if ((2 * r) % 8 != 0 && (b.back() >> ((2 * r) % 8)) != 0)
      throw MalformedError("qcmdpc ciphertext: nonzero padding bits");
    Ciphertext ct{CirculantPoly(r), CirculantPoly(r)};
    for (std::size_t i = 0; i < 2 * r; ++i) {
      if (!((b[i / 8] >> (i % 8)) & 1)) continue;
      if (i < r) ct.c0.set(i); else ct.c1.set(i - r);
    }
    return ct;
  }

private:
  static Support read_support(ByteReader& rd, std::uint32_t count, std::uint32_t bound) {
    Support s(count);
    for (std::uint32_t k = 0; k < count; ++k) {
      s[k] = rd.u32();
      if (s[k] >= bound || (k > 0 && s[k] <= s[k - 1]))
        throw MalformedError("support list not strictly increasing in range");
    }
    return s;
  }

  QcMdpcParams params_;
};

}  // namespace otf::qcmdpc
