#pragma once

#include <functional>

#include "otf/wire/frame.hpp"

namespace otf::testing {

using namespace otf::wire;

struct FuzzStats {
  std::size_t mutations = 0;
  std::size_t decoded = 0;        // still a valid frame, re-encodes to the mutated bytes
  std::size_t malformed = 0;      // rejected with MalformedError
  std::size_t non_canonical = 0;  // decoded but re-encoded differently
  std::size_t unexpected = 0;     // any other exception
  std::vector<std::string> notes;
};

/// Fully decodes a frame under `backend`, including every key and
/// ciphertext it carries, and re-encodes it.
inline Bytes decode_and_reencode(BackendId backend, Tier tier, ByteView bytes) {
  Frame f = decode_frame(bytes);
  switch (f.type) {
    case FrameType::Hello:
      f.payload = encode_hello(decode_hello(f.payload));
      break;
    case FrameType::Msg1: {
      auto m = decode_msg1(backend, f.payload);
      with_scheme(backend, tier, [&](const auto& s) { m.pk0 = s.encode(s.decode_public_key(m.pk0)); });
      f.payload = encode_msg1(backend, m);
      break;
    }
    case FrameType::Msg2: {
      auto m = decode_msg2(backend, f.payload);
      with_scheme(backend, tier, [&](const auto& s) {
        for (auto& ct : m.ciphertexts) ct = s.encode(s.decode_ciphertext(ct));
      });
      f.payload = encode_msg2(backend, m);
      break;
    }
    case FrameType::Bye:
      break;
  }
  return encode_frame(f);
}

/// Flips one uniformly chosen bit of a uniformly chosen frame, `count` times.
inline FuzzStats fuzz_single_bit(BackendId backend, Tier tier, const std::vector<Bytes>& frames, std::size_t count,
                                 Rng& rng) {
  FuzzStats st;
  for (std::size_t i = 0; i < count; ++i) {
    const Bytes& base = frames[rng.uniform(frames.size())];
    Bytes mutated = base;
    const auto bit = rng.uniform(mutated.size() * 8);
    mutated[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    ++st.mutations;
    try {
      if (decode_and_reencode(backend, tier, mutated) == mutated) ++st.decoded;
      else ++st.non_canonical;
    } catch (const MalformedError&) {
      ++st.malformed;
    } catch (const std::exception& e) {
      ++st.unexpected;
      if (st.notes.size() < 5) st.notes.push_back(e.what());
    }
  }
  return st;
}

}  // namespace otf::testing
