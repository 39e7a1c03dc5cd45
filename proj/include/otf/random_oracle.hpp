#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "otf/bytes.hpp"
#include "otf/params.hpp"
#include "otf/pke.hpp"
#include "otf/xof.hpp"

namespace otf {

using SessionId = std::array<std::uint8_t, 16>;

struct OracleContext {
  SessionId session_id{};
  BackendId backend = BackendId::ElGamal;
  std::size_t lambda = 32;  // pad length in bytes

  OracleContext() = default;
  OracleContext(const SessionId& sid, BackendId b, std::size_t lambda_bytes)
      : session_id(sid), backend(b), lambda(lambda_bytes) {
    if (lambda < 16) throw std::invalid_argument("lambda must be at least 16 bytes");
  }
};

namespace oracle_tag {
inline constexpr std::string_view kPublicKey = "OTF1-RO1";
inline constexpr std::string_view kPublicKeyIndexed = "OTF1-RO1K";
inline constexpr std::string_view kPad = "OTF1-RO2";
}  // namespace oracle_tag

/// tag || backend id || session id || input. The tags never share a prefix
/// followed by a valid backend byte, so the three oracle families are disjoint.
inline Bytes oracle_preimage(std::string_view tag, const OracleContext& ctx, ByteView input) {
  ByteWriter w;
  w.raw(tag);
  w.u8(static_cast<std::uint8_t>(ctx.backend));
  w.raw(ctx.session_id);
  w.raw(input);
  return std::move(w).take();
}

inline Bytes indexed_input(ByteView seed, std::uint16_t index) {
  Bytes in(seed.begin(), seed.end());
  in.push_back(static_cast<std::uint8_t>(index >> 8));
  in.push_back(static_cast<std::uint8_t>(index));
  return in;
}

template <PkeScheme S>
typename S::PublicKey ro1(const S& scheme, const OracleContext& ctx, ByteView seed) {
  auto uniform = shake256(oracle_preimage(oracle_tag::kPublicKey, ctx, seed), scheme.uniform_width());
  return scheme.pk_from_uniform(uniform);
}

/// RO1 query on seed || index, used for the k-1 constraints of 1-out-of-k.
template <PkeScheme S>
typename S::PublicKey ro1_indexed(const S& scheme, const OracleContext& ctx, ByteView seed,
                                  std::uint16_t index) {
  if (index == 0) throw std::invalid_argument("ro1_indexed: index starts at 1");
  auto uniform = shake256(oracle_preimage(oracle_tag::kPublicKeyIndexed, ctx, indexed_input(seed, index)),
                          scheme.uniform_width());
  return scheme.pk_from_uniform(uniform);
}

/// Pad oracle: lambda bytes derived from canonical plaintext bytes.
inline Bytes ro2(const OracleContext& ctx, ByteView plaintext_bytes) {
  return shake256(oracle_preimage(oracle_tag::kPad, ctx, plaintext_bytes), ctx.lambda);
}

}  // namespace otf
