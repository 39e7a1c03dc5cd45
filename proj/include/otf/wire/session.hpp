#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "otf/ot.hpp"
#include "otf/registry.hpp"
#include "otf/wire/frame.hpp"
#include "otf/wire/transport.hpp"

namespace otf::wire {

class ProtocolError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ReceiverConfig {
  BackendId backend = BackendId::ElGamal;
  Tier tier = Tier::B128;
  std::uint16_t k = 2;
  std::uint32_t lambda = 32;
  std::size_t choice = 0;
  bool allow_test_groups = false;
  std::optional<Bytes> seed{};  // deterministic runs for tests and vectors only
};

struct SenderConfig {
  BackendId backend = BackendId::ElGamal;
  Tier tier = Tier::B128;
  bool allow_test_groups = false;
  std::optional<Bytes> seed{};
};

struct FrameRecord {
  bool sent;
  FrameType type;
  std::size_t bytes;  // full encoded frame size
};

struct SessionReport {
  SessionId session_id{};
  std::vector<FrameRecord> frames;
  std::size_t bytes_sent = 0;
  std::size_t bytes_received = 0;
  double handshake_seconds = 0;
  double compute_seconds = 0;
  double total_seconds = 0;
  bool decryption_failed = false;

  /// Frames other than BYE sent by this party.
  [[nodiscard]] std::size_t content_frames_sent() const {
    std::size_t n = 0;
    for (const auto& f : frames) n += f.sent && f.type != FrameType::Bye;
    return n;
  }
  [[nodiscard]] std::size_t frames_of(FrameType t, bool sent) const {
    std::size_t n = 0;
    for (const auto& f : frames) n += f.sent == sent && f.type == t;
    return n;
  }
};

struct ReceiverResult {
  Bytes message;
  SessionReport report;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

class FrameChannel {
public:
  FrameChannel(Transport& t, SessionReport& report) : t_(t), report_(report) {}

  void send(FrameType type, const SessionId& sid, Bytes payload) {
    auto bytes = encode_frame({type, sid, std::move(payload)});
    t_.send(bytes);
    report_.bytes_sent += bytes.size();
    report_.frames.push_back({true, type, bytes.size()});
  }

  Frame recv() {
    std::array<std::uint8_t, kHeaderSize> header{};
    t_.recv(header);
    std::uint32_t len = 0;
    Frame f = decode_header(header, len);
    f.payload.resize(len);
    t_.recv(f.payload);
    report_.bytes_received += kHeaderSize + len;
    report_.frames.push_back({false, f.type, kHeaderSize + len});
    return f;
  }

  Frame expect(FrameType type, const SessionId& sid) {
    Frame f = recv();
    if (f.type == FrameType::Bye && type != FrameType::Bye)
      throw ProtocolError("peer aborted: " + bye_reason(f.payload));
    if (f.type != type) throw ProtocolError("expected " + std::string(to_string(type)) + ", got " +
                                            std::string(to_string(f.type)));
    if (f.session_id != sid) throw ProtocolError("session id mismatch");
    return f;
  }

  static std::string bye_reason(ByteView payload) {
    if (payload.empty()) return "no reason given";
    return std::string(payload.begin() + 1, payload.end());
  }

private:
  Transport& t_;
  SessionReport& report_;
};

// BYE payload: status (0 = done, 1 = abort) || reason text
inline Bytes bye_payload(std::uint8_t status, std::string_view reason) {
  ByteWriter w;
  w.u8(status);
  w.raw(reason);
  return std::move(w).take();
}

inline Rng make_rng(const std::optional<Bytes>& seed, std::string_view role) {
  if (!seed) return Rng::system();
  Bytes material(seed->begin(), seed->end());
  material.insert(material.end(), role.begin(), role.end());
  return Rng::from_bytes(material);
}

}  // namespace detail

/// Receiver role: HELLO out, HELLO back, MSG1 out, MSG2 in, BYE in.
inline ReceiverResult run_receiver(Transport& transport, const ReceiverConfig& config) {
  const auto start = detail::Clock::now();
  if (!is_registered(config.backend, config.tier)) throw std::invalid_argument("tier not registered for backend");
  if (is_test_only(config.backend, config.tier) && !config.allow_test_groups)
    throw std::invalid_argument("toy ElGamal group is refused outside test vectors");

  ReceiverResult result;
  auto& report = result.report;
  detail::FrameChannel ch(transport, report);
  Rng rng = detail::make_rng(config.seed, "receiver");
  SessionId sid{};
  rng.fill(sid);
  report.session_id = sid;
  const OracleContext ctx(sid, config.backend, config.lambda);

  const Hello hello{config.backend, config.tier, config.k, config.lambda};
  ch.send(FrameType::Hello, sid, encode_hello(hello));
  const Frame reply = ch.expect(FrameType::Hello, sid);
  if (decode_hello(reply.payload) != hello) throw ProtocolError("sender answered with different parameters");
  report.handshake_seconds = detail::seconds_since(start);

  double compute = 0;
  auto output = with_scheme(config.backend, config.tier, [&](const auto& scheme) {
    auto t0 = detail::Clock::now();
    auto [state, msg1] = receiver_round1(scheme, ctx, config.k, config.choice, rng);
    compute += detail::seconds_since(t0);
    ch.send(FrameType::Msg1, sid, encode_msg1(config.backend, msg1));

    const Frame f2 = ch.expect(FrameType::Msg2, sid);
    Msg2 msg2;
    try {
      msg2 = decode_msg2(config.backend, f2.payload);
    } catch (const MalformedError& e) {
      throw ProtocolError(std::string("MALFORMED_MSG2: ") + e.what());
    }
    t0 = detail::Clock::now();
    ReceiverOutput out;
    try {
      out = receiver_finish(scheme, state, msg2, rng);
    } catch (const MalformedError& e) {
      throw ProtocolError(std::string("MALFORMED_MSG2: ") + e.what());
    }
    compute += detail::seconds_since(t0);
    return out;
  });
  ch.expect(FrameType::Bye, sid);

  report.compute_seconds = compute;
  report.decryption_failed = output.decryption_failed;
  report.total_seconds = detail::seconds_since(start);
  result.message = std::move(output.message);
  return result;
}

/// Sender role: HELLO in, HELLO back, MSG1 in, MSG2 out, BYE out.
inline SessionReport run_sender(Transport& transport, const SenderInput& input, const SenderConfig& config) {
  const auto start = detail::Clock::now();
  SessionReport report;
  detail::FrameChannel ch(transport, report);
  Rng rng = detail::make_rng(config.seed, "sender");

  const Frame first = ch.recv();
  if (first.type != FrameType::Hello) throw ProtocolError("expected HELLO");
  const SessionId sid = first.session_id;
  report.session_id = sid;
  auto reject = [&](const std::string& reason) {
    ch.send(FrameType::Bye, sid, detail::bye_payload(1, reason));
    throw ProtocolError(reason);
  };

  Hello hello;
  try {
    hello = decode_hello(first.payload);
  } catch (const MalformedError& e) {
    reject(std::string("malformed HELLO: ") + e.what());
  }
  if (hello.backend != config.backend) reject("backend mismatch");
  if (hello.tier != config.tier) reject("tier mismatch");
  if (hello.k != input.messages.size()) reject("k does not match the number of sender messages");
  for (const auto& m : input.messages)
    if (m.size() != hello.lambda) reject("lambda does not match the sender message length");
  if (is_test_only(hello.backend, hello.tier) && !config.allow_test_groups)
    reject("toy ElGamal group is refused outside test vectors");

  ch.send(FrameType::Hello, sid, encode_hello(hello));
  report.handshake_seconds = detail::seconds_since(start);
  const OracleContext ctx(sid, hello.backend, hello.lambda);

  const Frame f1 = ch.expect(FrameType::Msg1, sid);
  with_scheme(hello.backend, hello.tier, [&](const auto& scheme) {
    Msg2 msg2;
    const auto t0 = detail::Clock::now();
    try {
      msg2 = sender_round2(scheme, ctx, input, decode_msg1(hello.backend, f1.payload), rng);
    } catch (const MalformedError& e) {
      reject(std::string("MALFORMED_MSG1: ") + e.what());
    }
    report.compute_seconds = detail::seconds_since(t0);
    ch.send(FrameType::Msg2, sid, encode_msg2(hello.backend, msg2));
  });
  ch.send(FrameType::Bye, sid, detail::bye_payload(0, "done"));
  report.total_seconds = detail::seconds_since(start);
  return report;
}

}  // namespace otf::wire
