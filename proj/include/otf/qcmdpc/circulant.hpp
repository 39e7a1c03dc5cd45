#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define OTF_HAVE_X86_CLMUL 1
#endif

#include "otf/bytes.hpp"

namespace otf::qcmdpc {

using Support = std::vector<std::uint32_t>;

/// Element of F2[x]/(x^r - 1), packed 64 coefficients per word, least
/// significant bit first. Bits at positions >= r are always zero.
class CirculantPoly {
public:
  CirculantPoly() = default;
  explicit CirculantPoly(std::size_t r) : r_(r), words_((r + 63) / 64, 0) {}

  static CirculantPoly one(std::size_t r) {
    CirculantPoly p(r);
    p.set(0);
    return p;
  }

  static CirculantPoly from_support(std::size_t r, std::span<const std::uint32_t> support) {
    CirculantPoly p(r);
    for (auto i : support) {
      if (i >= r) throw std::out_of_range("support index outside ring");
      p.flip(i);
    }
    return p;
  }

  /// Little-endian bit order within bytes, ceil(r/8) bytes, zero padding bits.
  static CirculantPoly from_bytes(std::size_t r, ByteView bytes) {
    if (bytes.size() != (r + 7) / 8) throw MalformedError("circulant: wrong byte length");
    CirculantPoly p(r);
    for (std::size_t i = 0; i < bytes.size(); ++i)
      p.words_[i / 8] |= std::uint64_t{bytes[i]} << (8 * (i % 8));
    if (r % 8 != 0 && (bytes.back() >> (r % 8)) != 0)
      throw MalformedError("circulant: nonzero padding bits");
    return p;
  }

  /// Same layout, but stray high bits are discarded instead of rejected.
  static CirculantPoly from_uniform_bytes(std::size_t r, ByteView bytes) {
    if (bytes.size() != (r + 7) / 8) throw std::invalid_argument("circulant: wrong byte length");
    CirculantPoly p(r);
    for (std::size_t i = 0; i < bytes.size(); ++i)
      p.words_[i / 8] |= std::uint64_t{bytes[i]} << (8 * (i % 8));
    p.mask_top();
    return p;
  }

  [[nodiscard]] Bytes to_bytes() const {
    Bytes out((r_ + 7) / 8);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
    return out;
  }

  [[nodiscard]] std::size_t size() const { return r_; }
  [[nodiscard]] std::span<std::uint64_t> words() { return words_; }
  [[nodiscard]] std::span<const std::uint64_t> words() const { return words_; }

  [[nodiscard]] bool bit(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

  [[nodiscard]] std::size_t weight() const {
    std::size_t w = 0;
    for (auto x : words_) w += static_cast<std::size_t>(std::popcount(x));
    return w;
  }
  [[nodiscard]] bool is_zero() const {
    std::uint64_t acc = 0;
    for (auto x : words_) acc |= x;
    return acc == 0;
  }
  [[nodiscard]] Support support() const {
    Support s;
    for (std::size_t i = 0; i < r_; ++i)
      if (bit(i)) s.push_back(static_cast<std::uint32_t>(i));
    return s;
  }

  CirculantPoly& operator^=(const CirculantPoly& o) {
    if (o.r_ != r_) throw std::invalid_argument("circulant: ring size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  friend CirculantPoly operator^(CirculantPoly a, const CirculantPoly& b) { return a ^= b; }
  friend bool operator==(const CirculantPoly&, const CirculantPoly&) = default;

  void mask_top() {
    if (r_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (r_ % 64)) - 1;
  }

private:
  std::size_t r_ = 0;
  std::vector<std::uint64_t> words_;
};

namespace detail {

// dst = src >> shift, keeping dst.size() words.
inline void shift_right(std::span<const std::uint64_t> src, std::size_t shift,
                        std::span<std::uint64_t> dst) {
  const std::size_t ws = shift / 64, bs = shift % 64;
  for (std::size_t i = 0; i < dst.size(); ++i) {
    std::uint64_t lo = i + ws < src.size() ? src[i + ws] : 0;
    std::uint64_t hi = i + ws + 1 < src.size() ? src[i + ws + 1] : 0;
    dst[i] = bs == 0 ? lo : (lo >> bs) | (hi << (64 - bs));
  }
}

// dst ^= src << shift, truncated to dst.size() words.
inline void xor_shift_left(std::span<const std::uint64_t> src, std::size_t shift,
                           std::span<std::uint64_t> dst) {
  const std::size_t ws = shift / 64, bs = shift % 64;
  for (std::size_t i = ws; i < dst.size(); ++i) {
    std::size_t j = i - ws;
    std::uint64_t lo = j < src.size() ? src[j] : 0;
    std::uint64_t prev = (j >= 1 && j - 1 < src.size()) ? src[j - 1] : 0;
    dst[i] ^= bs == 0 ? lo : (lo << bs) | (prev >> (64 - bs));
  }
}

// Reduces a product of up to 2r-1 coefficients modulo x^r - 1.
inline CirculantPoly fold(std::span<const std::uint64_t> wide, std::size_t r) {
  CirculantPoly out(r);
  auto w = out.words();
  std::copy_n(wide.begin(), w.size(), w.begin());
  out.mask_top();
  std::vector<std::uint64_t> high(w.size());
  shift_right(wide, r, high);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] ^= high[i];
  out.mask_top();
  return out;
}

inline void clmul_soft(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) {
  lo = 0;
  hi = 0;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t mask = std::uint64_t{0} - ((b >> i) & 1);
    lo ^= (a << i) & mask;
    hi ^= (i == 0 ? 0 : a >> (64 - i)) & mask;
  }
}

inline void mul_words_soft(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                           std::span<std::uint64_t> out) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::uint64_t lo, hi;
      clmul_soft(a[i], b[j], lo, hi);
      out[i + j] ^= lo;
      out[i + j + 1] ^= hi;
    }
  }
}

#ifdef OTF_HAVE_X86_CLMUL
__attribute__((target("pclmul,sse4.1"))) inline void mul_words_clmul(
    std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
    std::span<std::uint64_t> out) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const __m128i x = _mm_cvtsi64_si128(static_cast<long long>(a[i]));
    for (std::size_t j = 0; j < b.size(); ++j) {
      const __m128i p = _mm_clmulepi64_si128(x, _mm_cvtsi64_si128(static_cast<long long>(b[j])), 0);
      out[i + j] ^= static_cast<std::uint64_t>(_mm_cvtsi128_si64(p));
      out[i + j + 1] ^= static_cast<std::uint64_t>(_mm_extract_epi64(p, 1));
    }
  }
}

inline bool cpu_has_clmul() {
  static const bool has = __builtin_cpu_supports("pclmul") && __builtin_cpu_supports("sse4.1");
  return has;
}
#endif

inline void mul_words(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                      std::span<std::uint64_t> out) {
#ifdef OTF_HAVE_X86_CLMUL
  if (cpu_has_clmul()) {
    mul_words_clmul(a, b, out);
    return;
  }
#endif
  mul_words_soft(a, b, out);
}

}  // namespace detail

/// Multiplication by x^k for a public k.
inline CirculantPoly rotate(const CirculantPoly& v, std::size_t k) {
  const std::size_t r = v.size();
  k %= r;
  if (k == 0) return v;
  CirculantPoly out(r);
  detail::xor_shift_left(v.words(), k, out.words());
  out.mask_top();
  std::vector<std::uint64_t> wrap(out.words().size());
  detail::shift_right(v.words(), r - k, wrap);
  auto w = out.words();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] ^= wrap[i];
  return out;
}

/// Multiplication by x^k for a secret k: a barrel of public rotations with
/// masked selection, so the memory trace does not depend on k.
inline CirculantPoly rotate_secret(const CirculantPoly& v, std::uint32_t k) {
  const std::size_t r = v.size();
  k = static_cast<std::uint32_t>(k % r);
  CirculantPoly acc = v;
  const int bits = std::bit_width(static_cast<std::uint32_t>(r - 1));
  for (int b = 0; b < bits; ++b) {
    const std::size_t amount = (std::size_t{1} << b) % r;
    CirculantPoly moved = rotate(acc, amount);
    const std::uint64_t mask = std::uint64_t{0} - ((k >> b) & 1);
    auto dst = acc.words();
    auto src = moved.words();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (src[i] & mask) | (dst[i] & ~mask);
  }
  return acc;
}

/// Dense product in F2[x]/(x^r - 1).
inline CirculantPoly poly_mul(const CirculantPoly& a, const CirculantPoly& b) {
  if (a.size() != b.size()) throw std::invalid_argument("poly_mul: ring size mismatch");
  std::vector<std::uint64_t> wide(a.words().size() + b.words().size() + 1, 0);
  detail::mul_words(a.words(), b.words(), wide);
  return detail::fold(wide, a.size());
}

/// Sparse-by-dense product; `support` lists the nonzero coefficients of the
/// sparse factor and may be secret.
inline CirculantPoly poly_mul_sparse(std::span<const std::uint32_t> support, const CirculantPoly& dense) {
  CirculantPoly out(dense.size());
  for (auto i : support) out ^= rotate_secret(dense, i);
  return out;
}

/// a^(2^k): a public permutation of coefficients, i -> i * 2^k mod r.
inline CirculantPoly square_times(const CirculantPoly& a, std::size_t k) {
  const std::size_t r = a.size();
  std::uint64_t mult = 1 % r, base = 2 % r;
  for (std::size_t e = k; e; e >>= 1) {
    if (e & 1) mult = mult * base % r;
    base = base * base % r;
  }
  CirculantPoly out(r);
  auto dst = out.words();
  std::uint64_t pos = 0;
  for (std::size_t i = 0; i < r; ++i) {
    const std::uint64_t bit = a.bit(i);
    dst[pos / 64] |= bit << (pos % 64);
    pos += mult;
    if (pos >= r) pos -= r;
  }
  return out;
}

/// True iff r is prime and 2 generates (Z/rZ)*, which is exactly when
/// (x^r - 1)/(x - 1) is irreducible over F2.
inline bool is_valid_ring_size(std::uint64_t r) {
  if (r < 3) return false;
  for (std::uint64_t d = 2; d * d <= r; ++d)
    if (r % d == 0) return false;
  auto pow2 = [r](std::uint64_t e) {
    std::uint64_t result = 1, base = 2 % r;
    for (; e; e >>= 1) {
      if (e & 1) result = result * base % r;
      base = base * base % r;
    }
    return result;
  };
  std::uint64_t m = r - 1;
  for (std::uint64_t q = 2; q * q <= m; ++q) {
    if (m % q != 0) continue;
    if (pow2((r - 1) / q) == 1) return false;
    while (m % q == 0) m /= q;
  }
  if (m > 1 && pow2((r - 1) / m) == 1) return false;
  return true;
}

/// Inverse in F2[x]/(x^r - 1) for a valid ring size r. The ring splits as
/// F2 x F_{2^(r-1)}, so g is a unit iff g(1) = 1 and g is not a multiple of
/// (x^r - 1)/(x - 1); the inverse is then g^(2^(r-1) - 2), evaluated with an
/// Itoh-Tsujii addition chain.
inline std::optional<CirculantPoly> poly_inv(const CirculantPoly& g) {
  const std::size_t r = g.size();
  if (!is_valid_ring_size(r)) throw std::invalid_argument("poly_inv: ring size is not valid");
  const std::size_t wt = g.weight();
  if (wt % 2 == 0 || wt == r) return std::nullopt;

  // a = g^(2^m - 1), driven by the bits of n = r - 2.
  const std::size_t n = r - 2;
  CirculantPoly a = g;
  std::size_t m = 1;
  for (int b = std::bit_width(n) - 2; b >= 0; --b) {
    a = poly_mul(square_times(a, m), a);
    m *= 2;
    if ((n >> b) & 1) {
      a = poly_mul(square_times(a, 1), g);
      m += 1;
    }
  }
  return square_times(a, 1);
}

}  // namespace otf::qcmdpc
