#pragma once

#include <sodium.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <limits>
#include <span>
#include <stdexcept>

#include "otf/bytes.hpp"

namespace otf {

inline void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw std::runtime_error("libsodium initialisation failed");
}

/// ChaCha20 keystream generator. Seeded instances are fully deterministic,
/// which every test and test vector relies on; `Rng::system()` seeds from
/// the OS.
class Rng {
public:
  using Seed = std::array<std::uint8_t, crypto_stream_chacha20_ietf_KEYBYTES>;

  explicit Rng(const Seed& seed) : key_(seed) { ensure_sodium(); }

  /// Any-length seed material, compressed to a key with BLAKE2b.
  static Rng from_bytes(ByteView material) {
    ensure_sodium();
    Seed key{};
    crypto_generichash(key.data(), key.size(), material.data(), material.size(),
                       nullptr, 0);
    return Rng(key);
  }

  static Rng from_u64(std::uint64_t seed) {
    std::array<std::uint8_t, 8> le{};
    for (int i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    return from_bytes(le);
  }

  static Rng system() {
    ensure_sodium();
    Seed key{};
    randombytes_buf(key.data(), key.size());
    return Rng(key);
  }

  void fill(std::span<std::uint8_t> out) {
    std::size_t done = 0;
    while (done < out.size()) {
      if (pos_ == block_.size()) refill();
      const std::size_t n = std::min(out.size() - done, block_.size() - pos_);
      std::memcpy(out.data() + done, block_.data() + pos_, n);
      done += n;
      pos_ += n;
    }
  }

  Bytes bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
  }

  std::uint32_t next_u32() {
    std::array<std::uint8_t, 4> b{};
    fill(b);
    return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) |
           (std::uint32_t{b[3]} << 24);
  }

  std::uint64_t next_u64() {
    return std::uint64_t{next_u32()} | (std::uint64_t{next_u32()} << 32);
  }

  /// Uniform integer in [0, bound) by rejection sampling.
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform: empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
      auto v = next_u64();
      if (v < limit) return v % bound;
    }
  }

  // UniformRandomBitGenerator, so <random> and <algorithm> accept it.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

private:
  // Several ChaCha20 blocks per call; the keystream is the same as one block at a time.
  static constexpr std::size_t kBlocks = 16;

  void refill() {
    static constexpr std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
    block_.fill(0);
    crypto_stream_chacha20_ietf_xor_ic(block_.data(), block_.data(), block_.size(),
                                       nonce.data(), counter_, key_.data());
    counter_ += kBlocks;
    pos_ = 0;
  }

  Seed key_;
  std::uint32_t counter_ = 0;
  std::array<std::uint8_t, 64 * kBlocks> block_{};
  std::size_t pos_ = block_.size();
};

}  // namespace otf
