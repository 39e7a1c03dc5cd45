#pragma once

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

#include "otf/bytes.hpp"

namespace otf {

/// SHAKE-256 over the concatenation of `parts`, squeezed to `out.size()` bytes.
inline void shake256(std::initializer_list<ByteView> parts, std::span<std::uint8_t> out) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_shake256(), nullptr) != 1)
    throw std::runtime_error("SHAKE-256 unavailable");
  for (auto part : parts) {
    if (!part.empty() && EVP_DigestUpdate(ctx.get(), part.data(), part.size()) != 1)
      throw std::runtime_error("SHAKE-256 absorb failed");
  }
  if (out.empty()) return;
  if (EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1)
    throw std::runtime_error("SHAKE-256 squeeze failed");
}

inline Bytes shake256(ByteView input, std::size_t out_len) {
  Bytes out(out_len);
  shake256({input}, out);
  return out;
}

}  // namespace otf
