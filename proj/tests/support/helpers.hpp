#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "otf/ot.hpp"
#include "otf/registry.hpp"

namespace otf::testing {

inline Rng seeded(std::string_view label, std::uint64_t i = 0) {
  Bytes material(label.begin(), label.end());
  for (int b = 0; b < 8; ++b) material.push_back(static_cast<std::uint8_t>(i >> (8 * b)));
  return Rng::from_bytes(material);
}

inline OracleContext context(BackendId backend, Rng& rng, std::size_t lambda = 32) {
  SessionId sid{};
  rng.fill(sid);
  return OracleContext(sid, backend, lambda);
}

inline SenderInput random_input(std::size_t k, std::size_t lambda, Rng& rng) {
  SenderInput in;
  for (std::size_t i = 0; i < k; ++i) in.messages.push_back(rng.bytes(lambda));
  return in;
}

struct Transcript {
  Msg1 msg1;
  Msg2 msg2;
  ReceiverOutput output;
  SenderInput input;
};

/// One in-process OT execution with every random choice drawn from `rng`.
template <PkeScheme S>
Transcript run_ot(const S& scheme, std::size_t k, std::size_t choice, Rng& rng, std::size_t lambda = 32) {
  auto ctx = context(S::backend, rng, lambda);
  Transcript t;
  t.input = random_input(k, lambda, rng);
  auto [state, msg1] = receiver_round1(scheme, ctx, k, choice, rng);
  t.msg1 = msg1;
  t.msg2 = sender_round2(scheme, ctx, t.input, msg1, rng);
  t.output = receiver_finish(scheme, state, t.msg2, rng);
  return t;
}

inline std::vector<std::pair<BackendId, Tier>> toy_backends() {
  return {{BackendId::ElGamal, Tier::B128}, {BackendId::QcMdpc, Tier::Toy}, {BackendId::Lpn, Tier::Toy}};
}

inline std::string label(BackendId b, Tier t) {
  return std::string(to_string(b)) + "_" + std::string(to_string(t));
}

}  // namespace otf::testing
