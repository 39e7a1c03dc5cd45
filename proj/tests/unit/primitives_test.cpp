#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "keccak_ref.hpp"
#include "otf/qcmdpc/qcmdpc.hpp"
#include "otf/xof.hpp"

using namespace otf;
using otf::testing::seeded;

TEST(Bytes, HexRoundTrip) {
  Bytes b{0x00, 0x01, 0xab, 0xff};
  EXPECT_EQ(to_hex(b), "0001abff");
  EXPECT_EQ(from_hex("0001ABff"), b);
  EXPECT_THROW(from_hex("abc"), MalformedError);
  EXPECT_THROW(from_hex("zz"), MalformedError);
}

TEST(Bytes, ReaderUnderflowIsMalformed) {
  Bytes b{1, 2, 3};
  ByteReader rd(b);
  EXPECT_EQ(rd.u16(), 0x0102);
  EXPECT_THROW(rd.u16(), MalformedError);
  EXPECT_EQ(rd.u8(), 3);
  EXPECT_NO_THROW(rd.expect_end());
}

TEST(Bytes, WriterIsBigEndian) {
  ByteWriter w;
  w.u16(0x0102);
  w.u32(0x03040506);
  EXPECT_EQ(std::move(w).take(), (Bytes{1, 2, 3, 4, 5, 6}));
}

TEST(Rng, SeededStreamsAreReproducible) {
  auto a = seeded("rng");
  auto b = seeded("rng");
  EXPECT_EQ(a.bytes(1000), b.bytes(1000));
  EXPECT_NE(seeded("rng", 1).bytes(32), seeded("rng", 2).bytes(32));
}

TEST(Rng, ChunkingDoesNotChangeTheStream) {
  auto a = seeded("chunk");
  auto b = seeded("chunk");
  Bytes whole = a.bytes(3000);
  Bytes pieces;
  for (std::size_t n : {1, 63, 64, 65, 1000, 1807}) {
    auto part = b.bytes(n);
    pieces.insert(pieces.end(), part.begin(), part.end());
  }
  EXPECT_EQ(whole, pieces);
}

TEST(Rng, UniformStaysInRange) {
  auto rng = seeded("uniform");
  for (int i = 0; i < 10000; ++i) EXPECT_LT(rng.uniform(101), 101u);
  EXPECT_THROW(rng.uniform(0), std::invalid_argument);
}

TEST(Xof, MatchesIndependentKeccak) {
  auto rng = seeded("xof");
  for (std::size_t len : {0, 1, 135, 136, 137, 500}) {
    Bytes msg = rng.bytes(len);
    for (std::size_t out : {1, 32, 136, 300}) EXPECT_EQ(shake256(msg, out), otf::testing::shake256_ref(msg, out));
  }
}

TEST(Xof, KnownAnswerForEmptyInput) {
  EXPECT_EQ(to_hex(shake256(ByteView{}, 32)), "46b9dd2b0ba88d13233b3feb743eeb243fcd52ea62b81b82b50c27646ed5762f");
}

class OracleTest : public ::testing::Test {
protected:
  qcmdpc::QcMdpc scheme{qcmdpc::toy()};
  Rng rng = seeded("oracle");
  OracleContext ctx = otf::testing::context(BackendId::QcMdpc, rng);
};

TEST_F(OracleTest, PreimageLayout) {
  Bytes input{0xaa, 0xbb};
  auto pre = oracle_preimage(oracle_tag::kPad, ctx, input);
  ASSERT_EQ(pre.size(), 8 + 1 + 16 + 2);
  EXPECT_EQ(std::string(pre.begin(), pre.begin() + 8), "OTF1-RO2");
  EXPECT_EQ(pre[8], 2);
  EXPECT_TRUE(std::equal(ctx.session_id.begin(), ctx.session_id.end(), pre.begin() + 9));
  EXPECT_EQ(pre[25], 0xaa);
  EXPECT_EQ(pre[26], 0xbb);
}

TEST_F(OracleTest, Ro1IsDeterministic) {
  Bytes s = rng.bytes(16);
  EXPECT_EQ(ro1(scheme, ctx, s), ro1(scheme, ctx, s));
}

TEST_F(OracleTest, Ro1DistinctSeedsGiveDistinctKeys) {
  std::set<Bytes> seen;
  for (int i = 0; i < 10000; ++i) seen.insert(scheme.encode(ro1(scheme, ctx, rng.bytes(16))));
  EXPECT_EQ(seen.size(), 10000u);
}

TEST_F(OracleTest, Ro1MatchesFirstRBitsOfIndependentXof) {
  for (int i = 0; i < 20; ++i) {
    Bytes s = rng.bytes(16);
    auto pre = oracle_preimage(oracle_tag::kPublicKey, ctx, s);
    auto stream = otf::testing::shake256_ref(pre, (509 + 7) / 8);
    stream.back() &= 0x1f;  // 509 = 63 * 8 + 5 bits
    EXPECT_EQ(scheme.encode(ro1(scheme, ctx, s)), stream);
  }
}

TEST_F(OracleTest, Ro1IndexedSeparatesIndices) {
  Bytes s = rng.bytes(16);
  EXPECT_NE(ro1_indexed(scheme, ctx, s, 1), ro1_indexed(scheme, ctx, s, 2));
  EXPECT_EQ(ro1_indexed(scheme, ctx, s, 3), ro1_indexed(scheme, ctx, s, 3));
  EXPECT_NE(ro1_indexed(scheme, ctx, s, 1), ro1(scheme, ctx, s));
  EXPECT_THROW(ro1_indexed(scheme, ctx, s, 0), std::invalid_argument);
  EXPECT_EQ(indexed_input(s, 0x0102).back(), 0x02);
  EXPECT_EQ(indexed_input(s, 0x0102)[16], 0x01);
}

TEST_F(OracleTest, Ro2LengthIsLambda) {
  for (std::size_t lambda : {16, 32, 1024}) {
    OracleContext c(ctx.session_id, ctx.backend, lambda);
    EXPECT_EQ(ro2(c, Bytes{1, 2, 3}).size(), lambda);
    EXPECT_EQ(ro2(c, Bytes{1, 2, 3}), ro2(c, Bytes{1, 2, 3}));
  }
  EXPECT_THROW(OracleContext(ctx.session_id, ctx.backend, 15), std::invalid_argument);
}

TEST_F(OracleTest, TagsArePrefixDistinct) {
  Bytes s = rng.bytes(16);
  const std::vector<Bytes> pre{oracle_preimage(oracle_tag::kPublicKey, ctx, s),
                               oracle_preimage(oracle_tag::kPublicKeyIndexed, ctx, indexed_input(s, 1)),
                               oracle_preimage(oracle_tag::kPad, ctx, s)};
  for (std::size_t i = 0; i < pre.size(); ++i)
    for (std::size_t j = 0; j < pre.size(); ++j) {
      if (i == j) continue;
      const auto n = std::min(pre[i].size(), pre[j].size());
      EXPECT_FALSE(std::equal(pre[i].begin(), pre[i].begin() + n, pre[j].begin())) << i << " vs " << j;
    }
  // Same input bytes through RO1 and RO2 give unrelated outputs.
  OracleContext wide(ctx.session_id, ctx.backend, scheme.uniform_width());
  EXPECT_NE(ro2(wide, s), scheme.encode(ro1(scheme, ctx, s)));
}

TEST_F(OracleTest, SessionAndBackendSeparateOutputs) {
  Bytes p{9, 9, 9};
  OracleContext other = ctx;
  other.session_id[0] ^= 1;
  EXPECT_NE(ro2(ctx, p), ro2(other, p));
  OracleContext other_backend(ctx.session_id, BackendId::Lpn, ctx.lambda);
  EXPECT_NE(ro2(ctx, p), ro2(other_backend, p));
}

TEST_F(OracleTest, Ro2MonobitWithinThreeSigma) {
  OracleContext big(ctx.session_id, ctx.backend, 125000);  // 10^6 bits
  auto pad = ro2(big, Bytes{1});
  std::size_t ones = 0;
  for (auto b : pad) ones += std::popcount(b);
  const double n = 1e6, sigma = std::sqrt(n / 4);
  EXPECT_LT(std::fabs(static_cast<double>(ones) - n / 2), 3 * sigma);
}
