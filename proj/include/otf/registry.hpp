#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "otf/elgamal/elgamal.hpp"
#include "otf/lpn/lpn.hpp"
#include "otf/qcmdpc/qcmdpc.hpp"

namespace otf {

inline std::vector<Tier> registered_tiers(BackendId backend) {
  switch (backend) {
    case BackendId::ElGamal: return {Tier::Toy, Tier::B128};
    case BackendId::QcMdpc: return {Tier::Toy, Tier::B128, Tier::B192, Tier::B256};
    case BackendId::Lpn: return {Tier::Toy, Tier::Medium};
  }
  return {};
}

inline bool is_registered(BackendId backend, Tier tier) {
  for (auto t : registered_tiers(backend))
    if (t == tier) return true;
  return false;
}

/// The toy ElGamal group has brute-forceable discrete logs.
inline bool is_test_only(BackendId backend, Tier tier) {
  return backend == BackendId::ElGamal && tier == Tier::Toy;
}

/// Calls `fn` with a freshly constructed scheme for (backend, tier). Every
/// instantiation of `fn` must return the same type.
template <class Fn>
decltype(auto) with_scheme(BackendId backend, Tier tier, Fn&& fn) {
  if (!is_registered(backend, tier))
    throw std::invalid_argument(std::string("no ") + std::string(to_string(tier)) + " tier for backend " +
                                std::string(to_string(backend)));
  switch (backend) {
    case BackendId::ElGamal:
      if (tier == Tier::Toy) return fn(elgamal::ToyElGamal(elgamal::toy_params()));
      return fn(elgamal::RistrettoElGamal(elgamal::b128_params()));
    case BackendId::QcMdpc:
      return fn(qcmdpc::QcMdpc(*qcmdpc::by_tier(tier)));
    case BackendId::Lpn:
      return fn(lpn::Lpn(*lpn::by_tier(tier)));
  }
  throw std::invalid_argument("unknown backend");
}

}  // namespace otf
