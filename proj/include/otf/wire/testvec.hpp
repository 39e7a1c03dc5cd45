#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "otf/ot.hpp"
#include "otf/registry.hpp"
#include "otf/wire/frame.hpp"

namespace otf::wire {

struct TestVectorSpec {
  BackendId backend = BackendId::ElGamal;
  Tier tier = Tier::Toy;
  std::uint16_t k = 2;
  std::uint16_t choice = 0;
  std::uint32_t lambda = 32;
  Bytes seed;
};

/// One complete seeded transcript. Every field is stored as the exact bytes
/// that appear in the file.
struct TestVector {
  Bytes seed;
  std::vector<std::pair<std::string, Bytes>> fields;

  [[nodiscard]] const Bytes* find(std::string_view name) const {
    for (const auto& [n, v] : fields)
      if (n == name) return &v;
    return nullptr;
  }
  friend bool operator==(const TestVector&, const TestVector&) = default;
};

namespace detail {

inline Bytes be(std::uint64_t v, int width) {
  Bytes out(width);
  for (int i = width - 1; i >= 0; --i, v >>= 8) out[i] = static_cast<std::uint8_t>(v);
  return out;
}

inline std::uint64_t from_be(const Bytes& b) {
  std::uint64_t v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

// Independent streams for each party, all derived from the vector seed.
inline Rng sub_rng(ByteView seed, std::string_view label) {
  Bytes material(label.begin(), label.end());
  material.push_back(0);
  material.insert(material.end(), seed.begin(), seed.end());
  return Rng::from_bytes(material);
}

}  // namespace detail

inline TestVector generate_test_vector(const TestVectorSpec& spec) {
  if (spec.seed.empty()) throw std::invalid_argument("test vector needs a seed");
  if (spec.choice >= spec.k) throw std::invalid_argument("choice out of range");
  Rng setup = detail::sub_rng(spec.seed, "setup");
  Rng receiver_rng = detail::sub_rng(spec.seed, "receiver");
  Rng sender_rng = detail::sub_rng(spec.seed, "sender");

  SessionId sid{};
  setup.fill(sid);
  SenderInput input;
  for (std::size_t i = 0; i < spec.k; ++i) input.messages.push_back(setup.bytes(spec.lambda));
  const OracleContext ctx(sid, spec.backend, spec.lambda);

  TestVector tv;
  tv.seed = spec.seed;
  tv.fields.emplace_back("backend", Bytes{static_cast<std::uint8_t>(spec.backend)});
  tv.fields.emplace_back("tier", Bytes{static_cast<std::uint8_t>(spec.tier)});
  tv.fields.emplace_back("k", detail::be(spec.k, 2));
  tv.fields.emplace_back("choice", detail::be(spec.choice, 2));
  tv.fields.emplace_back("lambda", detail::be(spec.lambda, 4));
  tv.fields.emplace_back("session_id", Bytes(sid.begin(), sid.end()));
  for (std::size_t i = 0; i < spec.k; ++i) tv.fields.emplace_back("m_" + std::to_string(i), input.messages[i]);

  with_scheme(spec.backend, spec.tier, [&](const auto& scheme) {
    auto [state, msg1] = receiver_round1(scheme, ctx, spec.k, spec.choice, receiver_rng);
    const Msg2 msg2 = sender_round2(scheme, ctx, input, msg1, sender_rng);
    const ReceiverOutput out = receiver_finish(scheme, state, msg2, receiver_rng);
    tv.fields.emplace_back("msg1", encode_msg1(spec.backend, msg1));
    tv.fields.emplace_back("msg2", encode_msg2(spec.backend, msg2));
    tv.fields.emplace_back("output", out.message);
  });
  return tv;
}

inline void write_test_vector(std::ostream& os, const TestVector& tv) {
  os << "# seed = " << to_hex(tv.seed) << '\n';
  for (const auto& [name, value] : tv.fields) os << name << " = " << to_hex(value) << '\n';
}

inline std::string format_test_vector(const TestVector& tv) {
  std::ostringstream os;
  write_test_vector(os, tv);
  return os.str();
}

inline TestVector parse_test_vector(std::istream& is) {
  TestVector tv;
  bool have_seed = false;
  std::string line;
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  };
  while (std::getline(is, line)) {
    std::string_view v = trim(line);
    if (v.empty()) continue;
    if (v.front() == '#') {
      v = trim(v.substr(1));
      auto eq = v.find('=');
      if (eq != std::string_view::npos && trim(v.substr(0, eq)) == "seed") {
        tv.seed = from_hex(trim(v.substr(eq + 1)));
        have_seed = true;
      }
      continue;
    }
    auto eq = v.find('=');
    if (eq == std::string_view::npos) throw MalformedError("test vector: expected 'name = hex'");
    tv.fields.emplace_back(std::string(trim(v.substr(0, eq))), from_hex(trim(v.substr(eq + 1))));
  }
  if (!have_seed) throw MalformedError("test vector: missing '# seed = ...' line");
  return tv;
}

inline TestVectorSpec spec_of(const TestVector& tv) {
  auto field = [&](std::string_view name, std::size_t width) {
    const Bytes* b = tv.find(name);
    if (!b || b->size() != width) throw MalformedError("test vector: bad field " + std::string(name));
    return detail::from_be(*b);
  };
  TestVectorSpec spec;
  auto backend = backend_from_byte(static_cast<std::uint8_t>(field("backend", 1)));
  auto tier = tier_from_byte(static_cast<std::uint8_t>(field("tier", 1)));
  if (!backend || !tier) throw MalformedError("test vector: unknown backend or tier");
  spec.backend = *backend;
  spec.tier = *tier;
  spec.k = static_cast<std::uint16_t>(field("k", 2));
  spec.choice = static_cast<std::uint16_t>(field("choice", 2));
  spec.lambda = static_cast<std::uint32_t>(field("lambda", 4));
  spec.seed = tv.seed;
  return spec;
}

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> mismatches;
};

/// Regenerates the transcript from the recorded seed and parameters and
/// compares every field byte for byte.
inline VerifyResult verify_test_vector(const TestVector& recorded) {
  const TestVector fresh = generate_test_vector(spec_of(recorded));
  VerifyResult r;
  for (const auto& [name, value] : fresh.fields) {
    const Bytes* got = recorded.find(name);
    if (!got) r.mismatches.push_back(name + ": missing");
    else if (*got != value) r.mismatches.push_back(name + ": differs");
  }
  if (recorded.fields.size() != fresh.fields.size()) r.mismatches.push_back("field count differs");
  r.ok = r.mismatches.empty();
  return r;
}

}  // namespace otf::wire
