#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "otf/bytes.hpp"
#include "otf/rng.hpp"

namespace otf::lpn {

/// Dense row-major matrix over F2; a vector is a 1 x n matrix. Each row is
/// padded to whole 64-bit words and the padding stays zero.
class BitMatrix {
public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_((cols + 63) / 64), words_(rows * stride_, 0) {}

  static BitMatrix vector(std::size_t n) { return BitMatrix(1, n); }

  static BitMatrix uniform(std::size_t rows, std::size_t cols, Rng& rng) {
    BitMatrix m(rows, cols);
    for (auto& w : m.words_) w = rng.next_u64();
    m.clear_padding();
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::size_t size() const { return rows_ * cols_; }

  [[nodiscard]] bool get(std::size_t r, std::size_t c) const {
    return (words_[r * stride_ + c / 64] >> (c % 64)) & 1;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    auto& w = words_[r * stride_ + c / 64];
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    w = v ? (w | bit) : (w & ~bit);
  }
  // Vector accessors for 1 x n matrices.
  [[nodiscard]] bool operator[](std::size_t i) const { return get(0, i); }
  void set(std::size_t i, bool v) { set(0, i, v); }

  [[nodiscard]] std::size_t weight() const {
    std::size_t w = 0;
    for (auto x : words_) w += static_cast<std::size_t>(std::popcount(x));
    return w;
  }

  BitMatrix& operator^=(const BitMatrix& o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("BitMatrix: shape mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  friend BitMatrix operator^(BitMatrix a, const BitMatrix& b) { return a ^= b; }
  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

  /// this * v for a column vector v given as a 1 x cols matrix; result is 1 x rows.
  [[nodiscard]] BitMatrix mul_vec(const BitMatrix& v) const {
    if (v.rows_ != 1 || v.cols_ != cols_) throw std::invalid_argument("mul_vec: shape mismatch");
    BitMatrix out = vector(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < stride_; ++k) acc ^= words_[r * stride_ + k] & v.words_[k];
      out.set(r, static_cast<bool>(std::popcount(acc) & 1));
    }
    return out;
  }

  /// Matrix product over F2, accumulating rows of `rhs` selected by bits of this.
  [[nodiscard]] BitMatrix mul(const BitMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("mul: shape mismatch");
    BitMatrix out(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = 0; k < cols_; ++k) {
        if (!get(r, k)) continue;
        for (std::size_t w = 0; w < rhs.stride_; ++w)
          out.words_[r * out.stride_ + w] ^= rhs.words_[k * rhs.stride_ + w];
      }
    }
    return out;
  }

  // Continuous row-major bit packing, least significant bit first.
  void pack_bits(Bytes& out) const {
    const std::size_t start = out.size();
    out.resize(start + (size() + 7) / 8, 0);
    if (cols_ % 8 == 0) {
      // Rows start on byte boundaries, so whole words can be copied.
      const std::size_t row_bytes = cols_ / 8;
      for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t b = 0; b < row_bytes; ++b)
          out[start + r * row_bytes + b] = static_cast<std::uint8_t>(words_[r * stride_ + b / 8] >> (8 * (b % 8)));
      return;
    }
    std::size_t i = 0;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c, ++i)
        out[start + i / 8] |= static_cast<std::uint8_t>(get(r, c) << (i % 8));
  }

  /// Inverse of pack_bits; `strict` rejects nonzero padding bits.
  static BitMatrix unpack_bits(std::size_t rows, std::size_t cols, ByteView in, bool strict) {
    const std::size_t bits = rows * cols;
    if (in.size() != (bits + 7) / 8) throw MalformedError("bit matrix: wrong payload length");
    if (strict && bits % 8 != 0 && (in.back() >> (bits % 8)) != 0)
      throw MalformedError("bit matrix: nonzero padding bits");
    BitMatrix m(rows, cols);
    if (cols % 8 == 0) {
      const std::size_t row_bytes = cols / 8;
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t b = 0; b < row_bytes; ++b)
          m.words_[r * m.stride_ + b / 8] |= std::uint64_t{in[r * row_bytes + b]} << (8 * (b % 8));
      return m;
    }
    std::size_t i = 0;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c, ++i)
        if ((in[i / 8] >> (i % 8)) & 1) m.set(r, c, true);
    return m;
  }

  // Wire form: rows (4, BE) || cols (4, BE) || reserved (4, zero) || packed bits.
  [[nodiscard]] Bytes serialize() const {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(rows_));
    w.u32(static_cast<std::uint32_t>(cols_));
    w.u32(0);
    Bytes out = std::move(w).take();
    pack_bits(out);
    return out;
  }

  static BitMatrix deserialize(ByteReader& rd, std::size_t rows, std::size_t cols) {
    if (rd.u32() != rows || rd.u32() != cols) throw MalformedError("bit matrix: unexpected shape");
    if (rd.u32() != 0) throw MalformedError("bit matrix: reserved field must be zero");
    return unpack_bits(rows, cols, rd.take((rows * cols + 7) / 8), true);
  }

private:
  void clear_padding() {
    if (cols_ % 64 == 0) return;
    const std::uint64_t mask = (std::uint64_t{1} << (cols_ % 64)) - 1;
    for (std::size_t r = 0; r < rows_; ++r) words_[r * stride_ + stride_ - 1] &= mask;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> words_;
};

/// A Bernoulli rate held as an exact fraction num/den.
struct Rate {
  std::uint32_t num = 0;
  std::uint32_t den = 1;

  /// floor(rho * 2^32): a trial succeeds iff a fresh 32-bit draw is below it.
  [[nodiscard]] std::uint64_t threshold() const {
    if (den == 0 || 2 * std::uint64_t{num} > den) throw std::invalid_argument("rho must lie in [0, 1/2]");
    return (std::uint64_t{num} << 32) / den;
  }
  [[nodiscard]] double value() const { return static_cast<double>(num) / den; }
};

inline BitMatrix bernoulli_sample(Rate rho, std::size_t rows, std::size_t cols, Rng& rng) {
  const std::uint64_t threshold = rho.threshold();
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (rng.next_u32() < threshold) m.set(r, c, true);
  return m;
}

}  // namespace otf::lpn
