#include <gtest/gtest.h>

#include <future>
#include <thread>

#include "helpers.hpp"
#include "otf/wire/session.hpp"

using namespace otf;
using namespace otf::wire;
using otf::testing::seeded;

namespace {

// Counts every byte that crosses the wrapped transport.
class CountingTransport : public Transport {
public:
  explicit CountingTransport(Transport& inner) : inner_(inner) {}
  void send(ByteView data) override {
    sent += data.size();
    inner_.send(data);
  }
  void recv(std::span<std::uint8_t> out) override {
    inner_.recv(out);
    received += out.size();
  }
  std::size_t sent = 0;
  std::size_t received = 0;

private:
  Transport& inner_;
};

SenderInput messages(std::size_t k, std::size_t lambda, std::uint8_t base) {
  SenderInput in;
  for (std::size_t i = 0; i < k; ++i) in.messages.emplace_back(lambda, static_cast<std::uint8_t>(base + i));
  return in;
}

struct Outcome {
  std::optional<ReceiverResult> receiver;
  std::optional<SessionReport> sender;
  std::string receiver_error;
  std::string sender_error;
};

Outcome run_pair(const ReceiverConfig& rc, const SenderInput& in, const SenderConfig& sc) {
  auto [a, b] = MemoryPipe::create();
  Outcome out;
  std::thread sender([&, t = std::move(b)]() mutable {
    try {
      out.sender = run_sender(*t, in, sc);
    } catch (const std::exception& e) {
      out.sender_error = e.what();
    }
    t.reset();
  });
  try {
    out.receiver = run_receiver(*a, rc);
  } catch (const std::exception& e) {
    out.receiver_error = e.what();
  }
  a.reset();
  sender.join();
  return out;
}

}  // namespace

TEST(Session, MemoryPipeDeliversChosenMessageForEveryBackend) {
  for (auto [backend, tier] : {std::pair{BackendId::ElGamal, Tier::B128}, std::pair{BackendId::QcMdpc, Tier::Toy},
                               std::pair{BackendId::Lpn, Tier::Toy}, std::pair{BackendId::QcMdpc, Tier::B128}}) {
    for (std::uint16_t c : {0, 1}) {
      ReceiverConfig rc{backend, tier, 2, 24, c};
      auto out = run_pair(rc, messages(2, 24, 0x40), SenderConfig{backend, tier});
      ASSERT_TRUE(out.receiver) << out.receiver_error;
      ASSERT_TRUE(out.sender) << out.sender_error;
      EXPECT_EQ(out.receiver->message, Bytes(24, static_cast<std::uint8_t>(0x40 + c)));
      EXPECT_EQ(out.receiver->report.session_id, out.sender->session_id);
    }
  }
}

TEST(Session, OneOutOfFourOverTcpLoopback) {
  TcpListener listener("127.0.0.1", 0);
  const auto port = listener.port();
  auto in = messages(4, 32, 0x10);
  auto sender = std::async(std::launch::async, [&] {
    auto t = listener.accept();
    return run_sender(*t, in, SenderConfig{BackendId::ElGamal, Tier::B128});
  });
  auto t = TcpTransport::connect("127.0.0.1", port);
  auto res = run_receiver(*t, ReceiverConfig{BackendId::ElGamal, Tier::B128, 4, 32, 3});
  auto report = sender.get();
  EXPECT_EQ(res.message, in.messages[3]);
  EXPECT_EQ(report.session_id, res.report.session_id);
  EXPECT_EQ(res.report.bytes_sent, report.bytes_received);
  EXPECT_EQ(res.report.bytes_received, report.bytes_sent);
}

TEST(Session, EachSideSendsExactlyTwoContentFrames) {
  auto out = run_pair({BackendId::QcMdpc, Tier::Toy, 2, 32, 1}, messages(2, 32, 1), {BackendId::QcMdpc, Tier::Toy});
  ASSERT_TRUE(out.receiver && out.sender);
  const auto& r = out.receiver->report;
  const auto& s = *out.sender;
  EXPECT_EQ(r.content_frames_sent(), 2u);
  EXPECT_EQ(s.content_frames_sent(), 2u);
  EXPECT_EQ(r.frames_of(FrameType::Hello, true), 1u);
  EXPECT_EQ(r.frames_of(FrameType::Msg1, true), 1u);
  EXPECT_EQ(s.frames_of(FrameType::Msg2, true), 1u);
  EXPECT_EQ(s.frames_of(FrameType::Bye, true), 1u);
  EXPECT_EQ(r.frames_of(FrameType::Bye, false), 1u);
}

TEST(Session, ByteAccountingMatchesWireBytes) {
  auto [a, b] = MemoryPipe::create();
  CountingTransport ca(*a), cb(*b);
  auto in = messages(3, 40, 7);
  auto sender = std::async(std::launch::async, [&] { return run_sender(cb, in, {BackendId::Lpn, Tier::Toy}); });
  auto res = run_receiver(ca, {BackendId::Lpn, Tier::Toy, 3, 40, 2});
  auto report = sender.get();
  EXPECT_EQ(res.message, in.messages[2]);
  EXPECT_EQ(res.report.bytes_sent, ca.sent);
  EXPECT_EQ(res.report.bytes_received, ca.received);
  EXPECT_EQ(report.bytes_sent, cb.sent);
  EXPECT_EQ(report.bytes_received, cb.received);
  std::size_t frame_sum = 0;
  for (const auto& f : res.report.frames) frame_sum += f.sent ? f.bytes : 0;
  EXPECT_EQ(frame_sum, ca.sent);
}

TEST(Session, HelloMismatchAbortsBeforeMsg1) {
  struct Case {
    ReceiverConfig rc;
    SenderInput in;
    SenderConfig sc;
  };
  const std::vector<Case> cases{
      {{BackendId::ElGamal, Tier::B128, 2, 32, 0}, messages(2, 32, 0), {BackendId::QcMdpc, Tier::Toy}},
      {{BackendId::QcMdpc, Tier::B128, 2, 32, 0}, messages(2, 32, 0), {BackendId::QcMdpc, Tier::Toy}},
      {{BackendId::ElGamal, Tier::B128, 3, 32, 0}, messages(2, 32, 0), {BackendId::ElGamal, Tier::B128}},
      {{BackendId::ElGamal, Tier::B128, 2, 16, 0}, messages(2, 32, 0), {BackendId::ElGamal, Tier::B128}},
  };
  for (const auto& c : cases) {
    auto [a, b] = MemoryPipe::create();
    CountingTransport ca(*a);
    std::string sender_error;
    std::thread sender([&, t = std::move(b)]() mutable {
      try {
        run_sender(*t, c.in, c.sc);
      } catch (const ProtocolError& e) {
        sender_error = e.what();
      }
      t.reset();
    });
    EXPECT_THROW(run_receiver(ca, c.rc), ProtocolError);
    a.reset();
    sender.join();
    EXPECT_FALSE(sender_error.empty());
    // Only the receiver's HELLO frame left this side: 26-byte header plus 8-byte payload.
    EXPECT_EQ(ca.sent, kHeaderSize + 8);
  }
}

TEST(Session, ToyElGamalIsRefusedUnlessExplicitlyAllowed) {
  auto [a, b] = MemoryPipe::create();
  EXPECT_THROW(run_receiver(*a, {BackendId::ElGamal, Tier::Toy, 2, 32, 0}), std::invalid_argument);

  auto refused = run_pair({BackendId::ElGamal, Tier::Toy, 2, 32, 0, true}, messages(2, 32, 0),
                          {BackendId::ElGamal, Tier::Toy});
  EXPECT_FALSE(refused.receiver);
  EXPECT_NE(refused.receiver_error.find("peer aborted"), std::string::npos) << refused.receiver_error;

  auto allowed = run_pair({BackendId::ElGamal, Tier::Toy, 2, 32, 1, true}, messages(2, 32, 9),
                          {BackendId::ElGamal, Tier::Toy, true});
  ASSERT_TRUE(allowed.receiver) << allowed.receiver_error;
  EXPECT_EQ(allowed.receiver->message, Bytes(32, 10));
}

TEST(Session, SeededRunsAreReproducible) {
  ReceiverConfig rc{BackendId::ElGamal, Tier::B128, 2, 32, 1};
  rc.seed = from_hex("abcd");
  SenderConfig sc{BackendId::ElGamal, Tier::B128};
  sc.seed = from_hex("abcd");
  auto x = run_pair(rc, messages(2, 32, 0), sc);
  auto y = run_pair(rc, messages(2, 32, 0), sc);
  ASSERT_TRUE(x.receiver && y.receiver);
  EXPECT_EQ(x.receiver->report.session_id, y.receiver->report.session_id);
}

TEST(Session, UnregisteredTierIsRejectedLocally) {
  auto [a, b] = MemoryPipe::create();
  EXPECT_THROW(run_receiver(*a, {BackendId::QcMdpc, Tier::B80, 2, 32, 0}), std::invalid_argument);
  EXPECT_THROW(run_receiver(*a, {BackendId::Lpn, Tier::B128, 2, 32, 0}), std::invalid_argument);
}
