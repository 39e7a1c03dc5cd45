#pragma once

#include <compare>
#include <cstdint>

#include "otf/bytes.hpp"
#include "otf/rng.hpp"

namespace otf::elgamal {

/// Order-101 subgroup of (Z/607Z)*, generated by 64 = 2^6. Small enough that
/// every discrete log can be brute-forced; test use only.
struct ToyGroup {
  static constexpr std::uint32_t modulus = 607;
  static constexpr std::uint32_t order = 101;
  static constexpr std::uint32_t cofactor = 6;
  static constexpr std::uint32_t generator = 64;
  static constexpr std::size_t element_size = 2;
  static constexpr std::size_t scalar_size = 1;
  static constexpr std::size_t uniform_width = 64;
  static constexpr const char* name = "toy-z607-order101";

  struct Element {
    std::uint16_t value = 1;
    auto operator<=>(const Element&) const = default;
  };
  struct Scalar {
    std::uint8_t value = 0;
    auto operator<=>(const Scalar&) const = default;
  };

  static std::uint32_t pow_mod(std::uint32_t base, std::uint32_t exp) {
    std::uint32_t result = 1;
    base %= modulus;
    while (exp) {
      if (exp & 1) result = result * base % modulus;
      base = base * base % modulus;
      exp >>= 1;
    }
    return result;
  }

  static Element identity() { return {1}; }
  static Element op(Element a, Element b) {
    return {static_cast<std::uint16_t>(std::uint32_t{a.value} * b.value % modulus)};
  }
  static Element inverse(Element a) {
    return {static_cast<std::uint16_t>(pow_mod(a.value, modulus - 2))};
  }
  static Element exp(Element a, Scalar s) {
    return {static_cast<std::uint16_t>(pow_mod(a.value, s.value))};
  }
  static Element exp_base(Scalar s) { return exp({generator}, s); }

  static Scalar random_scalar(Rng& rng) { return {static_cast<std::uint8_t>(rng.uniform(order))}; }
  static Scalar scalar_add(Scalar a, Scalar b) {
    return {static_cast<std::uint8_t>((a.value + b.value) % order)};
  }

  // Wide reduction to a nonzero residue, then cofactor clearing. Each subgroup
  // element has exactly `cofactor` preimages in (Z/607Z)*, so the output is
  // uniform up to the negligible bias of reducing 512 bits mod 606; nobody
  // learns a discrete log base g along the way.
  static Element from_uniform(ByteView wide) {
    std::uint32_t acc = 0;
    for (auto b : wide) acc = (acc * 256 + b) % (modulus - 1);
    return {static_cast<std::uint16_t>(pow_mod(acc + 1, cofactor))};
  }

  static Bytes encode(Element e) {
    return {static_cast<std::uint8_t>(e.value >> 8), static_cast<std::uint8_t>(e.value)};
  }
  static Element decode_element(ByteView b) {
    if (b.size() != element_size) throw MalformedError("toy element: wrong length");
    std::uint32_t v = (std::uint32_t{b[0]} << 8) | b[1];
    if (v == 0 || v >= modulus || pow_mod(v, order) != 1)
      throw MalformedError("toy element: not in subgroup");
    return {static_cast<std::uint16_t>(v)};
  }
  static Bytes encode(Scalar s) { return {s.value}; }
  static Scalar decode_scalar(ByteView b) {
    if (b.size() != scalar_size || b[0] >= order) throw MalformedError("toy scalar: non-canonical");
    return {b[0]};
  }
};

}  // namespace otf::elgamal
