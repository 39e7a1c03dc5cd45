#include <gtest/gtest.h>

#include <fstream>

#include "fuzz.hpp"
#include "helpers.hpp"
#include "otf/wire/testvec.hpp"

using namespace otf;
using namespace otf::wire;
using otf::testing::seeded;

namespace {

Frame sample_frame(FrameType type, Bytes payload) {
  Frame f{type, {}, std::move(payload)};
  for (std::size_t i = 0; i < f.session_id.size(); ++i) f.session_id[i] = static_cast<std::uint8_t>(i * 17);
  return f;
}

}  // namespace

TEST(Frame, HeaderLayout) {
  auto bytes = encode_frame(sample_frame(FrameType::Msg2, {0xde, 0xad}));
  ASSERT_EQ(bytes.size(), kHeaderSize + 2);
  EXPECT_EQ(to_hex(ByteView(bytes).first(6)), "4f5446310103");
  EXPECT_EQ(bytes[6 + 1], 17);
  EXPECT_EQ(to_hex(ByteView(bytes).subspan(22, 4)), "00000002");
  EXPECT_EQ(decode_frame(bytes), sample_frame(FrameType::Msg2, {0xde, 0xad}));
}

TEST(Frame, RejectsBadMagicVersionTypeAndLength) {
  auto good = encode_frame(sample_frame(FrameType::Hello, {1, 2, 3}));
  auto with = [&](std::size_t pos, std::uint8_t v) {
    auto b = good;
    b[pos] = v;
    return b;
  };
  EXPECT_THROW(decode_frame(with(0, 'X')), MalformedError);
  EXPECT_THROW(decode_frame(with(4, 2)), MalformedError);
  EXPECT_THROW(decode_frame(with(5, 0)), MalformedError);
  EXPECT_THROW(decode_frame(with(5, 5)), MalformedError);
  EXPECT_THROW(decode_frame(with(25, 4)), MalformedError);
  auto trailing = good;
  trailing.push_back(0);
  EXPECT_THROW(decode_frame(trailing), MalformedError);
  for (std::size_t n = 0; n < good.size(); ++n)
    EXPECT_THROW(decode_frame(ByteView(good).first(n)), MalformedError) << n;
  auto huge = with(22, 0x7f);
  std::uint32_t len = 0;
  EXPECT_THROW(decode_header(ByteView(huge).first(kHeaderSize), len), MalformedError);
}

TEST(Hello, RoundTripAndValidation) {
  Hello h{BackendId::QcMdpc, Tier::B192, 7, 64};
  EXPECT_EQ(to_hex(encode_hello(h)), "0203000700000040");
  EXPECT_EQ(decode_hello(encode_hello(h)), h);
  EXPECT_THROW(decode_hello(encode_hello({BackendId::QcMdpc, Tier::B80, 2, 32})), MalformedError);
  EXPECT_THROW(decode_hello(encode_hello({BackendId::ElGamal, Tier::B256, 2, 32})), MalformedError);
  EXPECT_THROW(decode_hello(encode_hello({BackendId::Lpn, Tier::Toy, 1, 32})), MalformedError);
  EXPECT_THROW(decode_hello(encode_hello({BackendId::Lpn, Tier::Toy, 2, 8})), MalformedError);
  EXPECT_THROW(decode_hello(Bytes{1, 0, 0}), MalformedError);
}

class WireBackends : public ::testing::TestWithParam<std::pair<BackendId, Tier>> {};

TEST_P(WireBackends, MessageRoundTripsOnRandomValues) {
  auto [backend, tier] = GetParam();
  with_scheme(backend, tier, [&](const auto& s) {
    auto rng = seeded("msg-roundtrip", static_cast<int>(backend));
    const int count = backend == BackendId::Lpn ? 100 : 1000;
    for (int i = 0; i < count; ++i) {
      Msg1 m1{rng.bytes(s.common().kappa / 8), s.encode(s.pk_from_uniform(rng.bytes(s.uniform_width())))};
      auto enc1 = encode_msg1(backend, m1);
      ASSERT_EQ(decode_msg1(backend, enc1), m1);
      ASSERT_EQ(encode_msg1(backend, decode_msg1(backend, enc1)), enc1);

      const std::size_t k = 2 + i % 3;
      Msg2 m2;
      const auto pk = s.pk_from_uniform(rng.bytes(s.uniform_width()));
      for (std::size_t j = 0; j < k; ++j) {
        m2.masked.push_back(rng.bytes(32));
        m2.ciphertexts.push_back(s.encode(s.encrypt(pk, s.sample_plaintext(rng), rng)));
      }
      auto enc2 = encode_msg2(backend, m2);
      ASSERT_EQ(decode_msg2(backend, enc2), m2);
    }
  });
}

TEST_P(WireBackends, TruncationAndTrailingBytesAreMalformed) {
  auto [backend, tier] = GetParam();
  with_scheme(backend, tier, [&](const auto& s) {
    auto rng = seeded("truncate");
    auto t = otf::testing::run_ot(s, 2, 1, rng);
    auto enc1 = encode_msg1(backend, t.msg1);
    auto enc2 = encode_msg2(backend, t.msg2);
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, enc1.size() / 2, enc1.size() - 1})
      EXPECT_THROW(decode_msg1(backend, ByteView(enc1).first(n)), MalformedError);
    for (std::size_t n : {std::size_t{0}, std::size_t{5}, enc2.size() / 2, enc2.size() - 1})
      EXPECT_THROW(decode_msg2(backend, ByteView(enc2).first(n)), MalformedError);
    enc1.push_back(0);
    enc2.push_back(0);
    EXPECT_THROW(decode_msg1(backend, enc1), MalformedError);
    EXPECT_THROW(decode_msg2(backend, enc2), MalformedError);
    const BackendId other = backend == BackendId::Lpn ? BackendId::ElGamal : BackendId::Lpn;
    enc1.pop_back();
    EXPECT_THROW(decode_msg1(other, enc1), MalformedError);
  });
}

TEST_P(WireBackends, SingleBitMutationsNeverCrash) {
  auto [backend, tier] = GetParam();
  with_scheme(backend, tier, [&](const auto& s) {
    auto rng = seeded("fuzz", static_cast<int>(backend));
    auto t = otf::testing::run_ot(s, 2, 0, rng);
    SessionId sid{};
    rng.fill(sid);
    std::vector<Bytes> frames{
        encode_frame({FrameType::Hello, sid, encode_hello({backend, tier, 2, 32})}),
        encode_frame({FrameType::Msg1, sid, encode_msg1(backend, t.msg1)}),
        encode_frame({FrameType::Msg2, sid, encode_msg2(backend, t.msg2)}),
        encode_frame({FrameType::Bye, sid, Bytes{0, 'o', 'k'}}),
    };
    const std::size_t count = backend == BackendId::Lpn ? 2000 : 20000;
    auto st = otf::testing::fuzz_single_bit(backend, tier, frames, count, rng);
    EXPECT_EQ(st.unexpected, 0u) << (st.notes.empty() ? "" : st.notes.front());
    EXPECT_EQ(st.non_canonical, 0u);
    EXPECT_EQ(st.decoded + st.malformed, count);
    EXPECT_GT(st.malformed, 0u);
  });
}

INSTANTIATE_TEST_SUITE_P(Backends, WireBackends,
                         ::testing::Values(std::pair{BackendId::ElGamal, Tier::Toy},
                                           std::pair{BackendId::ElGamal, Tier::B128},
                                           std::pair{BackendId::QcMdpc, Tier::Toy},
                                           std::pair{BackendId::Lpn, Tier::Toy}),
                         [](const auto& info) { return otf::testing::label(info.param.first, info.param.second); });

TEST(Msg2, LayoutCarriesKAndLambdaOnce) {
  elgamal::RistrettoElGamal s(elgamal::b128_params());
  auto rng = seeded("msg2-layout");
  auto t = otf::testing::run_ot(s, 2, 0, rng);
  auto enc = encode_msg2(BackendId::ElGamal, t.msg2);
  EXPECT_EQ(to_hex(ByteView(enc).first(6)), "000200000020");
  // 2 + 4 header, 2 * 32 masked bytes, envelopes of 64 and 32 bytes each with 3 bytes of framing.
  EXPECT_EQ(enc.size(), 6u + 64 + (3 + 64) + (3 + 32));
  EXPECT_EQ(enc[6 + 64], 1);
  EXPECT_EQ(to_hex(ByteView(enc).subspan(6 + 64 + 1, 2)), "0040");
}

TEST(TestVector, FormatRoundTripsAndVerifies) {
  TestVectorSpec spec{BackendId::ElGamal, Tier::Toy, 3, 2, 16, from_hex("0102")};
  auto tv = generate_test_vector(spec);
  auto text = format_test_vector(tv);
  EXPECT_EQ(text.rfind("# seed = 0102\n", 0), 0u);
  std::istringstream in(text);
  auto parsed = parse_test_vector(in);
  EXPECT_EQ(parsed, tv);
  EXPECT_TRUE(verify_test_vector(parsed).ok);
  EXPECT_EQ(*parsed.find("output"), *parsed.find("m_2"));

  parsed.fields[6].second[0] ^= 1;  // m_0
  auto r = verify_test_vector(parsed);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.mismatches.size(), 1u);
}

TEST(TestVector, ParserRejectsMissingSeedAndBadLines) {
  std::istringstream no_seed("backend = 01\n");
  EXPECT_THROW(parse_test_vector(no_seed), MalformedError);
  std::istringstream bad("# seed = 00\nbackend 01\n");
  EXPECT_THROW(parse_test_vector(bad), MalformedError);
}

TEST(TestVector, CommittedGoldenVectorsAreByteStable) {
  const std::string dir = OTF_VECTOR_DIR;
  int checked = 0;
  for (const char* name : {"elgamal_toy_k2_c0", "elgamal_toy_k2_c1", "elgamal_toy_k4_c3", "elgamal_b128_k2_c1",
                           "qcmdpc_toy_k2_c1", "lpn_toy_k2_c0"}) {
    std::ifstream in(dir + "/" + name + ".txt");
    ASSERT_TRUE(in) << name;
    std::stringstream text;
    text << in.rdbuf();
    std::istringstream parse_in(text.str());
    auto tv = parse_test_vector(parse_in);
    auto r = verify_test_vector(tv);
    EXPECT_TRUE(r.ok) << name << ": " << (r.mismatches.empty() ? "" : r.mismatches.front());
    EXPECT_EQ(format_test_vector(generate_test_vector(spec_of(tv))), text.str()) << name;
    ++checked;
  }
  EXPECT_EQ(checked, 6);
}
