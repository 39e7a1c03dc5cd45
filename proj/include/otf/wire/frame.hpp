#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "otf/bytes.hpp"
#include "otf/ot.hpp"
#include "otf/params.hpp"
#include "otf/random_oracle.hpp"
#include "otf/registry.hpp"

namespace otf::wire {

inline constexpr std::array<std::uint8_t, 4> kMagic{'O', 'T', 'F', '1'};
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kHeaderSize = 4 + 1 + 1 + 16 + 4;
inline constexpr std::uint32_t kMaxPayload = 1u << 24;

enum class FrameType : std::uint8_t { Hello = 1, Msg1 = 2, Msg2 = 3, Bye = 4 };

inline std::string_view to_string(FrameType t) {
  switch (t) {
    case FrameType::Hello: return "HELLO";
    case FrameType::Msg1: return "MSG1";
    case FrameType::Msg2: return "MSG2";
    case FrameType::Bye: return "BYE";
  }
  return "?";
}

struct Frame {
  FrameType type = FrameType::Hello;
  SessionId session_id{};
  Bytes payload;
  friend bool operator==(const Frame&, const Frame&) = default;
};

// magic "OTF1" || version || type || session id (16) || payload length (4, BE) || payload
inline Bytes encode_frame(const Frame& f) {
  if (f.payload.size() > kMaxPayload) throw std::length_error("frame payload too large");
  ByteWriter w;
  w.raw(kMagic);
  w.u8(kVersion);
  w.u8(static_cast<std::uint8_t>(f.type));
  w.raw(f.session_id);
  w.u32(static_cast<std::uint32_t>(f.payload.size()));
  w.raw(f.payload);
  return std::move(w).take();
}

/// Validates a header and returns (type, session id, payload length).
inline Frame decode_header(ByteView header, std::uint32_t& payload_len) {
  ByteReader rd(header);
  auto magic = rd.take(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) throw MalformedError("bad magic");
  if (rd.u8() != kVersion) throw MalformedError("unsupported version");
  auto type = rd.u8();
  if (type < 1 || type > 4) throw MalformedError("unknown frame type");
  Frame f;
  f.type = static_cast<FrameType>(type);
  auto sid = rd.take(16);
  std::copy(sid.begin(), sid.end(), f.session_id.begin());
  payload_len = rd.u32();
  if (payload_len > kMaxPayload) throw MalformedError("payload length exceeds limit");
  rd.expect_end();
  return f;
}

inline Frame decode_frame(ByteView bytes) {
  if (bytes.size() < kHeaderSize) throw MalformedError("truncated frame header");
  std::uint32_t len = 0;
  Frame f = decode_header(bytes.first(kHeaderSize), len);
  if (bytes.size() - kHeaderSize != len) throw MalformedError("payload length mismatch");
  auto body = bytes.subspan(kHeaderSize);
  f.payload.assign(body.begin(), body.end());
  return f;
}

struct Hello {
  BackendId backend = BackendId::ElGamal;
  Tier tier = Tier::Toy;
  std::uint16_t k = 2;
  std::uint32_t lambda = 32;
  friend bool operator==(const Hello&, const Hello&) = default;
};

// backend (1) || tier (1) || k (2, BE) || lambda (4, BE)
inline Bytes encode_hello(const Hello& h) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(h.backend));
  w.u8(static_cast<std::uint8_t>(h.tier));
  w.u16(h.k);
  w.u32(h.lambda);
  return std::move(w).take();
}

inline Hello decode_hello(ByteView payload) {
  ByteReader rd(payload);
  auto backend = backend_from_byte(rd.u8());
  if (!backend) throw MalformedError("hello: unknown backend");
  auto tier = tier_from_byte(rd.u8());
  if (!tier || !is_registered(*backend, *tier)) throw MalformedError("hello: tier not registered for backend");
  Hello h{*backend, *tier, rd.u16(), rd.u32()};
  rd.expect_end();
  if (h.k < 2) throw MalformedError("hello: k must be at least 2");
  if (h.lambda < 16 || h.lambda > kMaxPayload / 2) throw MalformedError("hello: lambda out of range");
  return h;
}

// seed length (1) || seed || envelope(pk0)
inline Bytes encode_msg1(BackendId backend, const Msg1& m) {
  if (m.seed.empty() || m.seed.size() > 0xff) throw std::length_error("msg1: seed length");
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(m.seed.size()));
  w.raw(m.seed);
  w.raw(seal_envelope(backend, m.pk0));
  return std::move(w).take();
}

inline Msg1 decode_msg1(BackendId backend, ByteView payload) {
  ByteReader rd(payload);
  auto seed_len = rd.u8();
  if (seed_len == 0) throw MalformedError("msg1: empty seed");
  auto seed = rd.take(seed_len);
  auto pk0 = open_envelope(rd, backend);
  rd.expect_end();
  return {Bytes(seed.begin(), seed.end()), Bytes(pk0.begin(), pk0.end())};
}

// k (2, BE) || lambda (4, BE) || k masked strings || k envelope(ciphertext)
inline Bytes encode_msg2(BackendId backend, const Msg2& m) {
  const std::size_t k = m.masked.size();
  if (k < 2 || k > kMaxChoices || m.ciphertexts.size() != k) throw std::length_error("msg2: bad entry count");
  const std::size_t lambda = m.masked.front().size();
  ByteWriter w;
  w.u16(static_cast<std::uint16_t>(k));
  w.u32(static_cast<std::uint32_t>(lambda));
  for (const auto& s : m.masked) {
    if (s.size() != lambda) throw std::length_error("msg2: unequal masked lengths");
    w.raw(s);
  }
  for (const auto& ct : m.ciphertexts) w.raw(seal_envelope(backend, ct));
  return std::move(w).take();
}

inline Msg2 decode_msg2(BackendId backend, ByteView payload) {
  ByteReader rd(payload);
  const std::size_t k = rd.u16();
  const std::size_t lambda = rd.u32();
  if (k < 2) throw MalformedError("msg2: k must be at least 2");
  if (lambda == 0 || lambda * k > rd.remaining()) throw MalformedError("msg2: masked strings truncated");
  Msg2 m;
  for (std::size_t i = 0; i < k; ++i) {
    auto s = rd.take(lambda);
    m.masked.emplace_back(s.begin(), s.end());
  }
  for (std::size_t i = 0; i < k; ++i) {
    auto body = open_envelope(rd, backend);
    m.ciphertexts.emplace_back(body.begin(), body.end());
  }
  rd.expect_end();
  return m;
}

}  // namespace otf::wire
