#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace otf {

enum class BackendId : std::uint8_t { ElGamal = 1, QcMdpc = 2, Lpn = 3 };

// Medium is a non-normative LPN sizing outside the B-series security tiers.
enum class Tier : std::uint8_t { Toy = 0, B80 = 1, B128 = 2, B192 = 3, B256 = 4, Medium = 5 };

inline std::string_view to_string(BackendId id) {
  switch (id) {
    case BackendId::ElGamal: return "elgamal";
    case BackendId::QcMdpc: return "qcmdpc";
    case BackendId::Lpn: return "lpn";
  }
  return "unknown";
}

inline std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::Toy: return "TOY";
    case Tier::B80: return "B80";
    case Tier::B128: return "B128";
    case Tier::B192: return "B192";
    case Tier::B256: return "B256";
    case Tier::Medium: return "MEDIUM";
  }
  return "unknown";
}

inline std::optional<BackendId> backend_from_byte(std::uint8_t b) {
  if (b >= 1 && b <= 3) return static_cast<BackendId>(b);
  return std::nullopt;
}

inline std::optional<Tier> tier_from_byte(std::uint8_t b) {
  if (b <= 5) return static_cast<Tier>(b);
  return std::nullopt;
}

inline std::optional<BackendId> parse_backend(std::string_view s) {
  for (auto id : {BackendId::ElGamal, BackendId::QcMdpc, BackendId::Lpn})
    if (s == to_string(id)) return id;
  return std::nullopt;
}

inline std::optional<Tier> parse_tier(std::string_view s) {
  for (std::uint8_t b = 0; b <= 5; ++b) {
    auto t = static_cast<Tier>(b);
    if (s == to_string(t)) return t;
  }
  return std::nullopt;
}

/// Fields shared by every backend's parameter set.
struct CommonParams {
  BackendId backend;
  Tier tier;
  unsigned kappa;              // security parameter in bits; seed length is kappa/8 bytes
  std::size_t lambda_default;  // pad length in bytes
};

}  // namespace otf
