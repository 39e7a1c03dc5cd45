#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "otf/pke.hpp"
#include "otf/random_oracle.hpp"

namespace otf {

inline constexpr std::size_t kMaxChoices = 0xffff;

// Receiver -> sender: seed s and the encoded body of pk_0.
struct Msg1 {
  Bytes seed;
  Bytes pk0;
  friend bool operator==(const Msg1&, const Msg1&) = default;
};

// Sender -> receiver: k masked strings of lambda bytes and k encoded
// ciphertext bodies. Ciphertexts stay encoded until the receiver needs one,
// so an undecodable ciphertext takes the decryption-failure path.
struct Msg2 {
  std::vector<Bytes> masked;
  std::vector<Bytes> ciphertexts;
  friend bool operator==(const Msg2&, const Msg2&) = default;
};

struct SenderInput {
  std::vector<Bytes> messages;
};

template <PkeScheme S>
struct ReceiverState {
  std::size_t choice = 0;
  typename S::SecretKey sk;
  std::vector<typename S::PublicKey> public_keys;  // pk_0 .. pk_{k-1}
  Bytes seed;
  OracleContext ctx;
};

struct ReceiverOutput {
  Bytes message;
  bool decryption_failed = false;  // local diagnostic, never sent to the peer
};

/// Every pk_i from pk_0 and the seed. For k = 2 the constraint is
/// pk_0 * pk_1 = RO1(s); for k > 2 it is pk_0 * pk_j = RO1(s || j), j >= 1.
template <PkeScheme S>
std::vector<typename S::PublicKey> derive_public_keys(const S& scheme, const OracleContext& ctx,
                                                      ByteView seed, const typename S::PublicKey& pk0,
                                                      std::size_t k) {
  std::vector<typename S::PublicKey> pks{pk0};
  const auto pk0_inv = scheme.pk_inv(pk0);
  if (k == 2) {
    pks.push_back(scheme.pk_op(pk0_inv, ro1(scheme, ctx, seed)));
    return pks;
  }
  for (std::size_t j = 1; j < k; ++j)
    pks.push_back(scheme.pk_op(pk0_inv, ro1_indexed(scheme, ctx, seed, static_cast<std::uint16_t>(j))));
  return pks;
}

/// The group element pk_c must be combined with: RO1(s) for k = 2, RO1(s || c) otherwise.
template <PkeScheme S>
typename S::PublicKey constraint_target(const S& scheme, const OracleContext& ctx, ByteView seed,
                                        std::size_t k, std::size_t index) {
  return k == 2 ? ro1(scheme, ctx, seed)
                : ro1_indexed(scheme, ctx, seed, static_cast<std::uint16_t>(index));
}

template <PkeScheme S>
std::pair<ReceiverState<S>, Msg1> receiver_round1(const S& scheme, const OracleContext& ctx, std::size_t k,
                                                  std::size_t choice, Rng& rng) {
  if (k < 2 || k > kMaxChoices) throw std::invalid_argument("k must lie in [2, 65535]");
  if (choice >= k) throw std::invalid_argument("choice out of range");
  auto [pk_c, sk] = scheme.keygen(rng);
  Bytes seed = rng.bytes(scheme.common().kappa / 8);

  auto pk0 = pk_c;
  if (choice != 0) pk0 = scheme.pk_op(scheme.pk_inv(pk_c), constraint_target(scheme, ctx, seed, k, choice));

  ReceiverState<S> state{choice, std::move(sk), derive_public_keys(scheme, ctx, seed, pk0, k), seed, ctx};
  Msg1 msg{std::move(seed), scheme.encode(pk0)};
  return {std::move(state), std::move(msg)};
}

/// Throws MalformedError when msg1 does not parse under the session backend.
template <PkeScheme S>
Msg2 sender_round2(const S& scheme, const OracleContext& ctx, const SenderInput& input, const Msg1& msg1,
                   Rng& rng) {
  const std::size_t k = input.messages.size();
  if (k < 2 || k > kMaxChoices) throw std::invalid_argument("sender needs between 2 and 65535 messages");
  for (const auto& m : input.messages)
    if (m.size() != ctx.lambda) throw std::invalid_argument("every sender message must be lambda bytes");
  if (msg1.seed.size() != scheme.common().kappa / 8) throw MalformedError("msg1: seed has wrong length");
  const auto pk0 = scheme.decode_public_key(msg1.pk0);

  const auto pks = derive_public_keys(scheme, ctx, msg1.seed, pk0, k);
  std::vector<typename S::Plaintext> seeds;
  seeds.reserve(k);
  for (std::size_t i = 0; i < k; ++i) seeds.push_back(scheme.sample_plaintext(rng));
  const auto cts = encrypt_all(scheme, std::span(pks), std::span(std::as_const(seeds)), rng);

  Msg2 out;
  for (std::size_t i = 0; i < k; ++i) {
    Bytes masked = ro2(ctx, pt_bytes(scheme, seeds[i]));
    xor_into(masked, input.messages[i]);
    out.masked.push_back(std::move(masked));
    out.ciphertexts.push_back(scheme.encode(cts[i]));
  }
  return out;
}

/// Recovers messages[choice]. Decryption failure (including an undecodable
/// ciphertext) yields a uniformly random string with the diagnostic flag set;
/// only a Msg2 of the wrong shape throws MalformedError.
template <PkeScheme S>
ReceiverOutput receiver_finish(const S& scheme, const ReceiverState<S>& state, const Msg2& msg2, Rng& rng) {
  const std::size_t k = state.public_keys.size();
  const std::size_t lambda = state.ctx.lambda;
  if (msg2.masked.size() != k || msg2.ciphertexts.size() != k) throw MalformedError("msg2: wrong entry count");
  for (const auto& m : msg2.masked)
    if (m.size() != lambda) throw MalformedError("msg2: masked string has wrong length");

  std::optional<typename S::Plaintext> seed;
  try {
    std::vector<typename S::Ciphertext> cts;
    cts.reserve(k);
    for (const auto& body : msg2.ciphertexts) cts.push_back(scheme.decode_ciphertext(body));
    seed = decrypt_at(scheme, state.sk, std::span(std::as_const(cts)), state.choice);
  } catch (const MalformedError&) {
    seed.reset();
  }
  if (!seed) return {rng.bytes(lambda), true};

  Bytes out = ro2(state.ctx, pt_bytes(scheme, *seed));
  xor_into(out, msg2.masked[state.choice]);
  return {std::move(out), false};
}

}  // namespace otf
