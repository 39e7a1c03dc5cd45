#pragma once

#include <sodium.h>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>

#include "otf/bytes.hpp"
#include "otf/rng.hpp"

namespace otf::elgamal {

/// ristretto255 via libsodium: canonical 32-byte encodings and the standard
/// element-from-64-uniform-bytes map.
struct Ristretto255 {
  static constexpr std::size_t element_size = crypto_core_ristretto255_BYTES;
  static constexpr std::size_t scalar_size = crypto_core_ristretto255_SCALARBYTES;
  static constexpr std::size_t uniform_width = crypto_core_ristretto255_HASHBYTES;
  static constexpr const char* name = "ristretto255";

  struct Element {
    std::array<std::uint8_t, element_size> bytes{};  // all-zero encodes the identity
    auto operator<=>(const Element&) const = default;
  };
  struct Scalar {
    std::array<std::uint8_t, scalar_size> bytes{};  // little-endian, reduced
    auto operator<=>(const Scalar&) const = default;
  };

  static Element identity() { return {}; }

  static Element op(const Element& a, const Element& b) {
    Element out;
    if (crypto_core_ristretto255_add(out.bytes.data(), a.bytes.data(), b.bytes.data()) != 0)
      throw MalformedError("ristretto255: invalid operand");
    return out;
  }
  static Element inverse(const Element& a) {
    Element out;
    const Element id = identity();
    if (crypto_core_ristretto255_sub(out.bytes.data(), id.bytes.data(), a.bytes.data()) != 0)
      throw MalformedError("ristretto255: invalid operand");
    return out;
  }
  // libsodium refuses to return the identity; that only happens for a zero
  // scalar or identity base, so map the refusal back to the identity.
  static Element exp(const Element& a, const Scalar& s) {
    Element out;
    if (crypto_scalarmult_ristretto255(out.bytes.data(), s.bytes.data(), a.bytes.data()) != 0)
      return identity();
    return out;
  }
  static Element exp_base(const Scalar& s) {
    Element out;
    if (crypto_scalarmult_ristretto255_base(out.bytes.data(), s.bytes.data()) != 0) return identity();
    return out;
  }

  static Scalar random_scalar(Rng& rng) {
    std::array<std::uint8_t, crypto_core_ristretto255_NONREDUCEDSCALARBYTES> wide{};
    rng.fill(wide);
    Scalar s;
    crypto_core_ristretto255_scalar_reduce(s.bytes.data(), wide.data());
    return s;
  }
  static Scalar scalar_add(const Scalar& a, const Scalar& b) {
    Scalar s;
    crypto_core_ristretto255_scalar_add(s.bytes.data(), a.bytes.data(), b.bytes.data());
    return s;
  }

  static Element from_uniform(ByteView wide) {
    if (wide.size() != uniform_width) throw std::invalid_argument("ristretto255: need 64 uniform bytes");
    Element out;
    crypto_core_ristretto255_from_hash(out.bytes.data(), wide.data());
    return out;
  }

  static Bytes encode(const Element& e) { return {e.bytes.begin(), e.bytes.end()}; }
  static Element decode_element(ByteView b) {
    if (b.size() != element_size) throw MalformedError("ristretto255 element: wrong length");
    Element e;
    std::copy(b.begin(), b.end(), e.bytes.begin());
    if (e != identity() && crypto_core_ristretto255_is_valid_point(e.bytes.data()) != 1)
      throw MalformedError("ristretto255 element: non-canonical");
    return e;
  }
  static Bytes encode(const Scalar& s) { return {s.bytes.begin(), s.bytes.end()}; }
  static Scalar decode_scalar(ByteView b) {
    if (b.size() != scalar_size) throw MalformedError("ristretto255 scalar: wrong length");
    std::array<std::uint8_t, crypto_core_ristretto255_NONREDUCEDSCALARBYTES> wide{};
    std::copy(b.begin(), b.end(), wide.begin());
    Scalar s;
    crypto_core_ristretto255_scalar_reduce(s.bytes.data(), wide.data());
    if (!std::equal(b.begin(), b.end(), s.bytes.begin()))
      throw MalformedError("ristretto255 scalar: not reduced");
    return s;
  }
};

}  // namespace otf::elgamal
