#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "otf/bytes.hpp"
#include "otf/params.hpp"
#include "otf/qcmdpc/circulant.hpp"
#include "otf/qcmdpc/decoder.hpp"

namespace otf::qcmdpc {

/// r: circulant size (code length n = 2r); w: total row weight, split evenly
/// between f and g; t: error weight.
struct QcMdpcParams {
  CommonParams common;
  std::uint32_t r;
  std::uint32_t w;
  std::uint32_t t;
  DecoderConfig decoder{};

  [[nodiscard]] std::uint32_t n() const { return 2 * r; }
  [[nodiscard]] std::uint32_t half_weight() const { return w / 2; }
};

class InvalidParams : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline void validate(const QcMdpcParams& p) {
  if (!is_valid_ring_size(p.r))
    throw InvalidParams("r must be prime with 2 primitive mod r");
  if (p.w % 2 != 0 || (p.w / 2) % 2 == 0)
    throw InvalidParams("w/2 must be an odd integer so that g is invertible");
  if (p.w / 2 >= p.r) throw InvalidParams("row weight too large");
  if (p.t == 0 || p.t >= 2 * p.r) throw InvalidParams("error weight out of range");
}

// Smallest prime r in [500, 1500] with 2 primitive is 509. Scaling the B128
// densities gives w ~ 7 and t ~ 7; w is raised to the nearest admissible 10
// (w/2 odd) and t lowered to 6, where 10^4 trials measured a failure rate of 1e-4.
inline QcMdpcParams toy() { return {{BackendId::QcMdpc, Tier::Toy, 128, 32}, 509, 10, 6, {50, 0}}; }

// With hundreds of errors a pure max-count rule flips too few bits per
// iteration to finish within the cap, so the large tiers flip within 5 of the max.
inline constexpr DecoderConfig kLargeTierDecoder{50, 5};
inline QcMdpcParams b128() { return {{BackendId::QcMdpc, Tier::B128, 128, 32}, 10163, 142, 134, kLargeTierDecoder}; }
inline QcMdpcParams b192() { return {{BackendId::QcMdpc, Tier::B192, 192, 32}, 19853, 206, 199, kLargeTierDecoder}; }
inline QcMdpcParams b256() { return {{BackendId::QcMdpc, Tier::B256, 256, 32}, 32771, 274, 264, kLargeTierDecoder}; }

inline std::vector<QcMdpcParams> registry() { return {toy(), b128(), b192(), b256()}; }

inline std::optional<QcMdpcParams> by_tier(Tier tier) {
  for (auto& p : registry())
    if (p.common.tier == tier) return p;
  return std::nullopt;
}

// Registry record: tier (1) || r (4, BE) || w (2, BE) || t (2, BE).
inline Bytes serialize(const QcMdpcParams& p) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(p.common.tier));
  w.u32(p.r);
  w.u16(static_cast<std::uint16_t>(p.w));
  w.u16(static_cast<std::uint16_t>(p.t));
  return std::move(w).take();
}

/// Parses and validates a registry record. Throws MalformedError on framing
/// problems and InvalidParams when the ring size or weights are unusable.
inline QcMdpcParams load(ByteView record) {
  ByteReader rd(record);
  auto tier = tier_from_byte(rd.u8());
  if (!tier) throw MalformedError("unknown tier");
  QcMdpcParams p{};
  p.r = rd.u32();
  p.w = rd.u16();
  p.t = rd.u16();
  rd.expect_end();
  unsigned kappa = *tier == Tier::B192 ? 192 : *tier == Tier::B256 ? 256 : 128;
  p.common = {BackendId::QcMdpc, *tier, kappa, 32};
  p.decoder = *tier == Tier::Toy ? DecoderConfig{} : kLargeTierDecoder;
  validate(p);
  return p;
}

}  // namespace otf::qcmdpc
