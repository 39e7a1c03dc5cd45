#pragma once

// Brute-force reference models used as test oracles.

#include <boost/math/distributions/chi_squared.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace otf::testing {

/// Every power of 64 in (Z/607Z)*, computed by repeated multiplication.
struct ToyGroupTables {
  static constexpr std::uint32_t p = 607;
  static constexpr std::uint32_t q = 101;
  static constexpr std::uint32_t g = 64;

  std::array<std::uint32_t, q> power{};  // power[x] = g^x mod p
  std::map<std::uint32_t, std::uint32_t> log;

  ToyGroupTables() {
    std::uint32_t v = 1;
    for (std::uint32_t x = 0; x < q; ++x) {
      power[x] = v;
      log[v] = x;
      v = v * g % p;
    }
    if (v != 1 || log.size() != q) throw std::logic_error("64 does not generate an order-101 subgroup");
  }

  [[nodiscard]] std::uint32_t dlog(std::uint32_t h) const {
    auto it = log.find(h);
    if (it == log.end()) throw std::domain_error("not in the subgroup");
    return it->second;
  }
  [[nodiscard]] bool member(std::uint32_t h) const { return log.count(h) != 0; }
};

/// Exhaustive ElGamal decryption: find m with c2 = m * c1^x by trying every
/// subgroup element, where x is recovered from pk by table lookup.
inline std::uint32_t toy_decrypt_exhaustive(const ToyGroupTables& t, std::uint32_t pk, std::uint32_t c1,
                                            std::uint32_t c2) {
  const std::uint32_t x = t.dlog(pk);
  std::uint32_t shared = t.power[t.dlog(c1) * x % ToyGroupTables::q];
  std::optional<std::uint32_t> found;
  for (std::uint32_t e = 0; e < ToyGroupTables::q; ++e) {
    const std::uint32_t m = t.power[e];
    if (m * shared % ToyGroupTables::p == c2) {
      if (found) throw std::logic_error("two plaintexts match");
      found = m;
    }
  }
  if (!found) throw std::logic_error("no plaintext matches");
  return *found;
}

/// Cyclic convolution over GF(2) by the definition: c_k = sum_{i+j=k mod r} a_i b_j.
inline std::vector<std::uint8_t> schoolbook_cyclic(const std::vector<std::uint8_t>& a,
                                                   const std::vector<std::uint8_t>& b) {
  const std::size_t r = a.size();
  std::vector<std::uint8_t> c(r, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) c[(i + j) % r] ^= a[i] & b[j];
  return c;
}

/// Upper-tail p-value of Pearson's statistic against equal expected counts.
inline double chi_square_uniform_p(const std::vector<std::size_t>& counts) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  const double expected = static_cast<double>(total) / counts.size();
  double stat = 0;
  for (auto c : counts) stat += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace otf::testing
