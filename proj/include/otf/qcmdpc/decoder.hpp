#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "otf/qcmdpc/circulant.hpp"

namespace otf::qcmdpc {

struct DecoderConfig {
  std::uint32_t max_iterations = 50;
  // Bits whose unsatisfied-check count reaches (max count - delta) are flipped.
  std::uint32_t threshold_delta = 0;
};

struct DecodeResult {
  bool converged = false;
  CirculantPoly e0;
  CirculantPoly e1;
  std::uint32_t iterations = 0;
};

namespace detail {

// Per-position counters stored as bit planes, so accumulating a rotated
// syndrome touches every word regardless of the data.
class SlicedCounter {
public:
  SlicedCounter(std::size_t r, std::size_t max_count)
      : planes_(static_cast<std::size_t>(std::bit_width(max_count)), CirculantPoly(r)) {}

  void add(const CirculantPoly& v) {
    std::vector<std::uint64_t> carry(v.words().begin(), v.words().end());
    for (auto& plane : planes_) {
      auto p = plane.words();
      for (std::size_t i = 0; i < p.size(); ++i) {
        const std::uint64_t t = p[i] & carry[i];
        p[i] ^= carry[i];
        carry[i] = t;
      }
    }
  }

  void counts(std::vector<std::uint16_t>& out) const {
    const std::size_t r = planes_.front().size();
    out.assign(r, 0);
    for (std::size_t b = 0; b < planes_.size(); ++b) {
      auto p = planes_[b].words();
      for (std::size_t i = 0; i < r; ++i)
        out[i] = static_cast<std::uint16_t>(out[i] | (((p[i / 64] >> (i % 64)) & 1) << b));
    }
  }

private:
  std::vector<CirculantPoly> planes_;
};

// Unsatisfied parity checks of every bit in one half of the error vector:
// count[j] = #{ i in support : syndrome[(i + j) mod r] = 1 }.
inline void unsatisfied_checks(const Support& support, const CirculantPoly& syndrome,
                               std::vector<std::uint16_t>& out) {
  const std::size_t r = syndrome.size();
  SlicedCounter counter(r, support.size());
  for (auto i : support)
    counter.add(rotate_secret(syndrome, static_cast<std::uint32_t>((r - i) % r)));
  counter.counts(out);
}

inline CirculantPoly threshold_mask(const std::vector<std::uint16_t>& counts, std::uint32_t threshold) {
  CirculantPoly mask(counts.size());
  auto w = mask.words();
  for (std::size_t i = 0; i < counts.size(); ++i)
    w[i / 64] |= std::uint64_t{counts[i] >= threshold} << (i % 64);
  return mask;
}

}  // namespace detail

/// Iterative bit flipping against the secret parity check [cir(f) | cir(g)].
/// Each iteration flips every bit whose unsatisfied-check count is within
/// `threshold_delta` of the largest count seen in that iteration.
inline DecodeResult bit_flip_decode(const Support& f, const Support& g, CirculantPoly syndrome,
                                    const DecoderConfig& config) {
  const std::size_t r = syndrome.size();
  DecodeResult result{false, CirculantPoly(r), CirculantPoly(r), 0};
  std::vector<std::uint16_t> upc0, upc1;
  while (!syndrome.is_zero()) {
    if (result.iterations == config.max_iterations) return result;
    ++result.iterations;
    detail::unsatisfied_checks(f, syndrome, upc0);
    detail::unsatisfied_checks(g, syndrome, upc1);
    std::uint32_t top = 0;
    for (auto c : upc0) top = std::max<std::uint32_t>(top, c);
    for (auto c : upc1) top = std::max<std::uint32_t>(top, c);
    const std::uint32_t threshold = std::max<std::uint32_t>(1, top > config.threshold_delta ? top - config.threshold_delta : 1);
    auto flip0 = detail::threshold_mask(upc0, threshold);
    auto flip1 = detail::threshold_mask(upc1, threshold);
    result.e0 ^= flip0;
    result.e1 ^= flip1;
    syndrome ^= poly_mul_sparse(f, flip0);
    syndrome ^= poly_mul_sparse(g, flip1);
  }
  result.converged = true;
  return result;
}

}  // namespace otf::qcmdpc
