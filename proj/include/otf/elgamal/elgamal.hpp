#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "otf/elgamal/ristretto_group.hpp"
#include "otf/elgamal/toy_group.hpp"
#include "otf/pke.hpp"

namespace otf::elgamal {

template <class Group>
struct SharedRandCiphertext {
  typename Group::Element c1;
  std::vector<typename Group::Element> c2;
};

/// ElGamal over a prime-order group. One instance is one session's view of
/// the scheme: it counts every group exponentiation it performs.
template <class Group>
class ElGamal {
public:
  using Element = typename Group::Element;
  using Scalar = typename Group::Scalar;

  struct PublicKey {
    Element element;
    auto operator<=>(const PublicKey&) const = default;
  };
  struct SecretKey {
    Scalar scalar;
    auto operator<=>(const SecretKey&) const = default;
  };
  struct Plaintext {
    Element element;
    auto operator<=>(const Plaintext&) const = default;
  };
  // c1 is absent for every entry of a shared-randomness batch except the first.
  struct Ciphertext {
    std::optional<Element> c1;
    Element c2;
    auto operator<=>(const Ciphertext&) const = default;
  };

  static constexpr BackendId backend = BackendId::ElGamal;

  explicit ElGamal(CommonParams common) : common_(common) {}

  [[nodiscard]] CommonParams common() const { return common_; }

  [[nodiscard]] std::uint64_t exp_count() const { return exps_; }
  void reset_exp_count() { exps_ = 0; }

  std::pair<PublicKey, SecretKey> keygen(Rng& rng) const {
    auto sk = Group::random_scalar(rng);
    return {PublicKey{exp_base(sk)}, SecretKey{sk}};
  }

  Ciphertext encrypt(const PublicKey& pk, const Plaintext& m, Rng& rng) const {
    auto r = Group::random_scalar(rng);
    return {exp_base(r), Group::op(m.element, exp(pk.element, r))};
  }

  /// One randomness r across all keys: g^r once, then m_i * pk_i^r.
  SharedRandCiphertext<Group> encrypt_shared(std::span<const PublicKey> pks,
                                             std::span<const Plaintext> pts, Rng& rng) const {
    if (pks.size() != pts.size()) throw std::invalid_argument("encrypt_shared: size mismatch");
    auto r = Group::random_scalar(rng);
    SharedRandCiphertext<Group> out{exp_base(r), {}};
    out.c2.reserve(pks.size());
    for (std::size_t i = 0; i < pks.size(); ++i)
      out.c2.push_back(Group::op(pts[i].element, exp(pks[i].element, r)));
    return out;
  }

  std::vector<Ciphertext> encrypt_batch(std::span<const PublicKey> pks,
                                        std::span<const Plaintext> pts, Rng& rng) const {
    auto shared = encrypt_shared(pks, pts, rng);
    std::vector<Ciphertext> cts;
    cts.reserve(shared.c2.size());
    for (std::size_t i = 0; i < shared.c2.size(); ++i)
      cts.push_back({i == 0 ? std::optional<Element>(shared.c1) : std::nullopt, shared.c2[i]});
    return cts;
  }

  Element decrypt_pair(const SecretKey& sk, const Element& c1, const Element& c2) const {
    return Group::op(c2, Group::inverse(exp(c1, sk.scalar)));
  }

  std::optional<Plaintext> decrypt(const SecretKey& sk, const Ciphertext& ct) const {
    if (!ct.c1) return std::nullopt;
    return Plaintext{decrypt_pair(sk, *ct.c1, ct.c2)};
  }

  std::optional<Plaintext> decrypt_at(const SecretKey& sk, std::span<const Ciphertext> cts,
                                      std::size_t index) const {
    if (index >= cts.size()) return std::nullopt;
    const auto& c1 = cts[index].c1 ? cts[index].c1 : cts.front().c1;
    if (!c1) return std::nullopt;
    return Plaintext{decrypt_pair(sk, *c1, cts[index].c2)};
  }

  PublicKey pk_op(const PublicKey& a, const PublicKey& b) const {
    return {Group::op(a.element, b.element)};
  }
  PublicKey pk_inv(const PublicKey& a) const { return {Group::inverse(a.element)}; }
  PublicKey pk_identity() const { return {Group::identity()}; }

  [[nodiscard]] std::size_t uniform_width() const { return Group::uniform_width; }
  PublicKey pk_from_uniform(ByteView bytes) const {
    if (bytes.size() != Group::uniform_width)
      throw std::invalid_argument("pk_from_uniform: wrong input width");
    return {Group::from_uniform(bytes)};
  }

  Plaintext sample_plaintext(Rng& rng) const {
    Bytes wide = rng.bytes(Group::uniform_width);
    return {Group::from_uniform(wide)};
  }

  Bytes encode(const PublicKey& pk) const { return Group::encode(pk.element); }
  Bytes encode(const SecretKey& sk) const { return Group::encode(sk.scalar); }
  Bytes encode(const Plaintext& pt) const { return Group::encode(pt.element); }
  Bytes encode(const Ciphertext& ct) const {
    Bytes out;
    if (ct.c1) out = Group::encode(*ct.c1);
    auto c2 = Group::encode(ct.c2);
    out.insert(out.end(), c2.begin(), c2.end());
    return out;
  }

  PublicKey decode_public_key(ByteView b) const { return {Group::decode_element(b)}; }
  SecretKey decode_secret_key(ByteView b) const { return {Group::decode_scalar(b)}; }
  Plaintext decode_plaintext(ByteView b) const { return {Group::decode_element(b)}; }
  Ciphertext decode_ciphertext(ByteView b) const {
    constexpr auto n = Group::element_size;
    if (b.size() == 2 * n) return {Group::decode_element(b.first(n)), Group::decode_element(b.subspan(n))};
    if (b.size() == n) return {std::nullopt, Group::decode_element(b)};
    throw MalformedError("elgamal ciphertext: wrong length");
  }

private:
  Element exp_base(const Scalar& s) const {
    ++exps_;
    return Group::exp_base(s);
  }
  Element exp(const Element& a, const Scalar& s) const {
    ++exps_;
    return Group::exp(a, s);
  }

  CommonParams common_;
  mutable std::uint64_t exps_ = 0;
};

using ToyElGamal = ElGamal<ToyGroup>;
using RistrettoElGamal = ElGamal<Ristretto255>;

inline CommonParams toy_params() { return {BackendId::ElGamal, Tier::Toy, 128, 32}; }
inline CommonParams b128_params() { return {BackendId::ElGamal, Tier::B128, 128, 32}; }

}  // namespace otf::elgamal
