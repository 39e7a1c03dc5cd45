#pragma once

#include <concepts>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "otf/bytes.hpp"
#include "otf/params.hpp"
#include "otf/rng.hpp"

namespace otf {

// The contract every OT backend satisfies: an encryption scheme whose
// public-key space is an abelian group, plus a map from uniform bytes onto
// that group. Decryption failure is an ordinary empty optional.
template <class S>
concept PkeScheme = requires(const S& s, Rng& rng, ByteView bytes,
                             const typename S::PublicKey& pk, const typename S::SecretKey& sk,
                             const typename S::Ciphertext& ct, const typename S::Plaintext& pt) {
  { S::backend } -> std::convertible_to<BackendId>;
  { s.common() } -> std::convertible_to<CommonParams>;
  { s.keygen(rng) } -> std::same_as<std::pair<typename S::PublicKey, typename S::SecretKey>>;
  { s.encrypt(pk, pt, rng) } -> std::same_as<typename S::Ciphertext>;
  { s.decrypt(sk, ct) } -> std::same_as<std::optional<typename S::Plaintext>>;
  { s.pk_op(pk, pk) } -> std::same_as<typename S::PublicKey>;
  { s.pk_inv(pk) } -> std::same_as<typename S::PublicKey>;
  { s.pk_identity() } -> std::same_as<typename S::PublicKey>;
  { s.uniform_width() } -> std::convertible_to<std::size_t>;
  { s.pk_from_uniform(bytes) } -> std::same_as<typename S::PublicKey>;
  { s.sample_plaintext(rng) } -> std::same_as<typename S::Plaintext>;
  { s.encode(pk) } -> std::same_as<Bytes>;
  { s.encode(sk) } -> std::same_as<Bytes>;
  { s.encode(ct) } -> std::same_as<Bytes>;
  { s.encode(pt) } -> std::same_as<Bytes>;
  { s.decode_public_key(bytes) } -> std::same_as<typename S::PublicKey>;
  { s.decode_secret_key(bytes) } -> std::same_as<typename S::SecretKey>;
  { s.decode_ciphertext(bytes) } -> std::same_as<typename S::Ciphertext>;
  { s.decode_plaintext(bytes) } -> std::same_as<typename S::Plaintext>;
};

/// Canonical plaintext bytes, the input to the pad oracle.
template <PkeScheme S>
Bytes pt_bytes(const S& scheme, const typename S::Plaintext& pt) {
  return scheme.encode(pt);
}

// Backends that can encrypt several plaintexts under several keys jointly
// (ElGamal with shared randomness) expose encrypt_batch/decrypt_at.
template <class S>
concept BatchEncrypting = PkeScheme<S> && requires(const S& s, Rng& rng,
                                                   std::span<const typename S::PublicKey> pks,
                                                   std::span<const typename S::Plaintext> pts,
                                                   std::span<const typename S::Ciphertext> cts,
                                                   const typename S::SecretKey& sk) {
  { s.encrypt_batch(pks, pts, rng) } -> std::same_as<std::vector<typename S::Ciphertext>>;
  { s.decrypt_at(sk, cts, std::size_t{}) } -> std::same_as<std::optional<typename S::Plaintext>>;
};

template <PkeScheme S>
std::vector<typename S::Ciphertext> encrypt_all(const S& scheme,
                                                std::span<const typename S::PublicKey> pks,
                                                std::span<const typename S::Plaintext> pts,
                                                Rng& rng) {
  if constexpr (BatchEncrypting<S>) {
    return scheme.encrypt_batch(pks, pts, rng);
  } else {
    std::vector<typename S::Ciphertext> cts;
    cts.reserve(pks.size());
    for (std::size_t i = 0; i < pks.size(); ++i) cts.push_back(scheme.encrypt(pks[i], pts[i], rng));
    return cts;
  }
}

template <PkeScheme S>
std::optional<typename S::Plaintext> decrypt_at(const S& scheme, const typename S::SecretKey& sk,
                                                std::span<const typename S::Ciphertext> cts,
                                                std::size_t index) {
  if constexpr (BatchEncrypting<S>) {
    return scheme.decrypt_at(sk, cts, index);
  } else {
    return scheme.decrypt(sk, cts[index]);
  }
}

// Envelope: backend id (1 byte) || body length (2 bytes BE) || body.
inline Bytes seal_envelope(BackendId backend, ByteView body) {
  if (body.size() > 0xffff) throw std::length_error("envelope body exceeds 65535 bytes");
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(backend));
  w.u16(static_cast<std::uint16_t>(body.size()));
  w.raw(body);
  return std::move(w).take();
}

/// Reads one envelope from `r` and returns its body.
inline ByteView open_envelope(ByteReader& r, BackendId expected) {
  auto id = r.u8();
  if (id != static_cast<std::uint8_t>(expected)) throw MalformedError("backend id mismatch");
  auto len = r.u16();
  return r.take(len);
}

inline ByteView open_envelope(ByteView data, BackendId expected) {
  ByteReader r(data);
  auto body = open_envelope(r, expected);
  r.expect_end();
  return body;
}

template <PkeScheme S, class T>
Bytes seal(const S& scheme, const T& value) {
  return seal_envelope(S::backend, scheme.encode(value));
}

}  // namespace otf
