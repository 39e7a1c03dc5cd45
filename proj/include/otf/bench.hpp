#pragma once

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

#include <json.hpp>

#include "otf/registry.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <x86intrin.h>
#define OTF_HAVE_TSC 1
#endif

namespace otf::bench {

struct Row {
  std::string op;
  double median_us = 0;
  double median_kcycles = 0;  // time-stamp counter ticks / 1000; 0 when no counter is available
};

struct Table {
  BackendId backend;
  Tier tier;
  std::size_t iterations = 0;
  std::size_t decrypt_failures = 0;
  std::vector<Row> rows;

  [[nodiscard]] const Row& row(std::string_view op) const {
    for (const auto& r : rows)
      if (r.op == op) return r;
    throw std::out_of_range("no bench row " + std::string(op));
  }
};

namespace detail {

inline std::uint64_t ticks() {
#ifdef OTF_HAVE_TSC
  return __rdtsc();
#else
  return 0;
#endif
}

struct Sample {
  double us;
  double kcycles;
};

template <class Fn>
decltype(auto) measure(std::vector<Sample>& out, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto c0 = ticks();
  struct Record {
    std::vector<Sample>& out;
    std::chrono::steady_clock::time_point t0;
    std::uint64_t c0;
    ~Record() {
      const auto c1 = ticks();
      const double us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
      out.push_back({us, static_cast<double>(c1 - c0) / 1000.0});
    }
  } record{out, t0, c0};
  return fn();
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

inline Row summarize(std::string op, const std::vector<Sample>& samples) {
  std::vector<double> us, kc;
  for (const auto& s : samples) {
    us.push_back(s.us);
    kc.push_back(s.kcycles);
  }
  return {std::move(op), median(us), median(kc)};
}

}  // namespace detail

/// Medians of keygen, encrypt and decrypt over `iterations` fresh key pairs.
inline Table run(BackendId backend, Tier tier, std::size_t iterations, Rng& rng) {
  if (iterations == 0) throw std::invalid_argument("bench needs at least one iteration");
  Table table{backend, tier, iterations, 0, {}};
  std::vector<detail::Sample> kg, enc, dec;
  with_scheme(backend, tier, [&](const auto& scheme) {
    for (std::size_t i = 0; i < iterations; ++i) {
      auto [pk, sk] = detail::measure(kg, [&] { return scheme.keygen(rng); });
      const auto pt = scheme.sample_plaintext(rng);
      const auto ct = detail::measure(enc, [&] { return scheme.encrypt(pk, pt, rng); });
      const auto got = detail::measure(dec, [&] { return scheme.decrypt(sk, ct); });
      if (!got || scheme.encode(*got) != scheme.encode(pt)) ++table.decrypt_failures;
    }
  });
  table.rows = {detail::summarize("keygen", kg), detail::summarize("encrypt", enc),
                detail::summarize("decrypt", dec)};
  return table;
}

inline nlohmann::json to_json(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"op", r.op}, {"median_us", r.median_us}, {"median_kcycles", r.median_kcycles}});
  return {{"backend", to_string(t.backend)}, {"tier", to_string(t.tier)}, {"iterations", t.iterations},
          {"decrypt_failures", t.decrypt_failures}, {"rows", rows}};
}

inline std::string to_text(const Table& t) {
  std::string out = std::string(to_string(t.backend)) + " " + std::string(to_string(t.tier)) + ", " +
                    std::to_string(t.iterations) + " iterations\n";
  char line[96];
  std::snprintf(line, sizeof line, "%-8s %14s %16s\n", "op", "median_us", "median_kcycles");
  out += line;
  for (const auto& r : t.rows) {
    std::snprintf(line, sizeof line, "%-8s %14.2f %16.2f\n", r.op.c_str(), r.median_us, r.median_kcycles);
    out += line;
  }
  return out;
}

}  // namespace otf::bench
