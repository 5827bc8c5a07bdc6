#include <gtest/gtest.h>

#include <filesystem>

#include "../support/oracles.hpp"
#include "etdr/error.hpp"
#include "etdr/protocol.hpp"
#include "etdr/session_store.hpp"

using namespace etdr;

namespace {

Message random_message(std::uint64_t r, EntropySource& rng) {
  Message m;
  for (std::uint64_t done = 0; done < r; done += 64) {
    const unsigned c = static_cast<unsigned>(std::min<std::uint64_t>(64, r - done));
    m.append(rng.bits(c), c);
  }
  return m;
}

oracle::Bits to_bits(const Message& m) {
  oracle::Bits b(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) b[i] = m.get(i);
  return b;
}

}  // namespace

TEST(Protocol, HashVectorMatchesOracle) {
  const Params p = experimental_params(40, 3, 7, 6);
  SeededEntropy rng(1);
  const KeyBundle kb = keygen(p, rng);
  const Message m = random_message(p.r, rng);
  const HashVector hv = compute_hash_vector(kb.alice, m);
  ASSERT_EQ(hv.values.size(), p.N);
  for (unsigned j = 0; j < p.N; ++j) {
    EXPECT_EQ(hv.values[j].value(),
              oracle::hash(kb.alice.et_keys[j].value(), to_bits(m), p.l, gf2::irreducible_poly(p.l).low));
  }
  EXPECT_EQ(HashVector::from_bits(hv.to_bits(), p.l, p.N, Role::Alice), hv);
  EXPECT_THROW(compute_hash_vector(kb.alice, random_message(p.r + 1, rng)), Error);
}

TEST(Protocol, ArbitrationRuleTable) {
  const unsigned N = 4;
  EXPECT_EQ(arbitration_rule(N, {4, 0, 0, 4}, true), Verdict::BothCorrect);
  EXPECT_EQ(arbitration_rule(N, {4, 1, 3, 4}, false), Verdict::ACorrect);
  EXPECT_EQ(arbitration_rule(N, {4, 3, 1, 4}, false), Verdict::BCorrect);
  EXPECT_EQ(arbitration_rule(N, {4, 2, 2, 4}, false), Verdict::Undecidable);
  EXPECT_EQ(arbitration_rule(N, {4, 0, 0, 3}, false), Verdict::ACorrect);
  EXPECT_EQ(arbitration_rule(N, {3, 0, 0, 4}, false), Verdict::BCorrect);
  EXPECT_EQ(arbitration_rule(N, {3, 0, 0, 3}, false), Verdict::Undecidable);
}

TEST(Protocol, ArbitrationRuleNeverFiresForBoth) {
  // Exhaustive over all count tuples at N = 3.
  for (unsigned aa = 0; aa <= 3; ++aa)
    for (unsigned ab = 0; ab <= 3; ++ab)
      for (unsigned ba = 0; ba <= 3; ++ba)
        for (unsigned bb = 0; bb <= 3; ++bb) EXPECT_NO_THROW(arbitration_rule(3, {aa, ab, ba, bb}, false));
}

TEST(Protocol, HonestRunAndDifferingData) {
  const Params p = derive_params(256, pow2(-4));
  SeededEntropy rng(2);
  const KeyBundle kb = keygen(p, rng);
  const Message m = random_message(p.r, rng);

  SessionRecord rec(kb.ttp.session, p);
  EXPECT_EQ(et_decide(rec, kb.ttp, compute_hash_vector(kb.alice, m), compute_hash_vector(kb.bob, m)),
            EtOutcome::Success);
  EXPECT_EQ(dr_arbitrate(rec, kb.ttp, m, m), Verdict::BothCorrect);
  EXPECT_THROW(dr_arbitrate(rec, kb.ttp, m, m), Error);

  Message other = m;
  other.set(17, !other.get(17));
  SessionRecord rec2(kb.ttp.session, p);
  EXPECT_EQ(et_decide(rec2, kb.ttp, compute_hash_vector(kb.alice, m), compute_hash_vector(kb.bob, other)),
            EtOutcome::Failure);
  EXPECT_THROW(dr_arbitrate(rec2, kb.ttp, m, other), Error);
}

TEST(Protocol, GCountsAgainstDirectCount) {
  const Params p = experimental_params(12, 3, 3, 6);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SeededEntropy rng(seed);
    const KeyBundle kb = keygen(p, rng);
    const Message ma = random_message(p.r, rng), mb = random_message(p.r, rng);
    const HashVector sa = compute_hash_vector(kb.alice, ma), sb = compute_hash_vector(kb.bob, ma);
    const GCounts g = g_counts(kb.ttp, sa, sb, ma, mb);
    const auto low = gf2::irreducible_poly(p.l).low;
    GCounts want;
    for (unsigned j = 0; j < p.N; ++j) {
      const auto ka = kb.alice.et_keys[j].value(), kbv = kb.bob.et_keys[j].value();
      want.aa += oracle::hash(ka, to_bits(ma), p.l, low) == sa.values[j].value();
      want.ab += oracle::hash(ka, to_bits(mb), p.l, low) == sa.values[j].value();
      want.ba += oracle::hash(kbv, to_bits(ma), p.l, low) == sb.values[j].value();
      want.bb += oracle::hash(kbv, to_bits(mb), p.l, low) == sb.values[j].value();
    }
    EXPECT_EQ(g.aa, want.aa);
    EXPECT_EQ(g.ab, want.ab);
    EXPECT_EQ(g.ba, want.ba);
    EXPECT_EQ(g.bb, want.bb);
  }
}

TEST(SessionRecord, WriteOnceAndExtension) {
  const Params p = experimental_params(8, 2, 2, 4);
  SeededEntropy rng(3);
  const KeyBundle kb = keygen(p, rng);
  SessionRecord rec(kb.ttp.session, p);
  const SessionRecord before = rec;
  const HashVector hv = compute_hash_vector(kb.alice, random_message(p.r, rng));
  rec.set_hash_vector(hv);
  EXPECT_THROW(rec.set_hash_vector(hv), Error);
  EXPECT_TRUE(before.is_extended_by(rec));
  EXPECT_FALSE(rec.is_extended_by(before));
  rec.set_et_outcome(EtOutcome::Failure);
  EXPECT_THROW(rec.set_et_outcome(EtOutcome::Success), Error);
  EXPECT_EQ(SessionRecord::from_raw(rec.raw()), rec);
}

class StoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("etdr-store-" + std::to_string(::getpid()));
    SeededEntropy rng(4);
    kb_ = keygen(experimental_params(8, 2, 2, 4), rng);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
  KeyBundle kb_;
};

TEST_F(StoreTest, PutGetAppendOnly) {
  SessionStore store(dir_, kb_.ttp.store_key);
  SessionRecord rec(kb_.ttp.session, kb_.ttp.params);
  EXPECT_FALSE(store.contains(rec.id()));
  store.put(rec);
  EXPECT_TRUE(store.contains(rec.id()));
  EXPECT_EQ(store.get(rec.id()), rec);

  SessionRecord newer = rec;
  newer.set_et_outcome(EtOutcome::Failure);
  store.put(newer);
  EXPECT_EQ(store.get(rec.id()).et_outcome(), EtOutcome::Failure);
  try {
    store.put(rec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ProtocolState);
  }
}

TEST_F(StoreTest, TamperAndWrongKeyRejected) {
  SessionStore store(dir_, kb_.ttp.store_key);
  const SessionRecord rec(kb_.ttp.session, kb_.ttp.params);
  store.put(rec);
  auto bytes = encode_session(rec, kb_.ttp.store_key);
  bytes[10] ^= 1;
  EXPECT_THROW(decode_session(bytes, kb_.ttp.store_key), Error);
  StoreKey other = kb_.ttp.store_key;
  other[0] ^= 1;
  SessionStore wrong(dir_, other);
  try {
    wrong.get(rec.id());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::KeyIo);
  }
}
