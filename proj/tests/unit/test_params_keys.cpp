#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "etdr/error.hpp"
#include "etdr/keyfile.hpp"
#include "etdr/keys.hpp"
#include "etdr/params.hpp"

using namespace etdr;

namespace {

// Smallest n with 2^n >= (16/eps)^3, by exact integer comparison.
unsigned n_oracle(const Rational& eps) {
  const Rational cube = pow(Rational(16) / eps, 3);
  unsigned n = 0;
  while (Rational(pow2(n)) < cube) ++n;
  return n;
}

void expect_kind(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
    ADD_FAILURE() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace

TEST(Params, TheoremCornerValues) {
  const Params p = derive_params(256, pow2(-4));
  EXPECT_EQ(p.n, 24u);
  EXPECT_EQ(p.l, 8u);
  EXPECT_EQ(p.N, 48u);
  EXPECT_EQ(p.total_key_bits(), 2048u);
  EXPECT_EQ(p.et_comm_budget_bits(), 1028u);
  EXPECT_EQ(p.dr_comm_budget_bits(), 772u);
}

TEST(Params, ClosedFormsAgree) {
  for (std::uint64_t r : {256ull, 1000ull, 1ull << 20}) {
    for (const char* e : {"2^-4", "2^-8", "1e-6", "3/1000"}) {
      const Params p = derive_params(r, parse_rational(e));
      const std::uint64_t n = p.n, l = p.l;
      EXPECT_EQ(p.total_key_bits(), 8 * (n * l + 2 * n + 2 * l));
      EXPECT_EQ(p.et_comm_budget_bits(), 4 * (n * l + 2 * n + 2 * l + 1));
      EXPECT_EQ(p.dr_comm_budget_bits(), 2 * (r + 4 * n + 4 * l + 2));
    }
  }
}

TEST(Params, NMatchesExactOracle) {
  for (const char* e : {"2^-4", "2^-5", "1/17", "1/100", "1e-12", "2^-40", "7/1000"}) {
    const Rational eps = parse_rational(e);
    EXPECT_EQ(derive_params(256, eps).n, n_oracle(eps)) << e;
  }
}

TEST(Params, LargeCorner) {
  const Params p = derive_params(1ull << 50, parse_rational("1e-12"));
  EXPECT_EQ(p.n, 132u);
  EXPECT_EQ(p.l, 50u);
  EXPECT_EQ(p.N, 264u);
  EXPECT_EQ(p.et_comm_budget_bits(), 27860u);
}

TEST(Params, DomainChecks) {
  expect_kind(ErrorKind::ParamDomain, [] { derive_params(255, pow2(-4)); });
  expect_kind(ErrorKind::ParamDomain, [] { derive_params(256, pow2(-3)); });
  expect_kind(ErrorKind::ParamDomain, [] { derive_params(256, Rational(0)); });
  expect_kind(ErrorKind::ParamDomain, [] { experimental_params(4, 3, 2, 2); });
  EXPECT_EQ(ceil_log2(1), 0u);
  EXPECT_EQ(ceil_log2(256), 8u);
  EXPECT_EQ(ceil_log2(257), 9u);
}

TEST(Keys, KeygenStructure) {
  const Params p = derive_params(256, pow2(-4));
  SeededEntropy rng(5);
  const KeyBundle kb = keygen(p, rng);
  const auto& omega = kb.ttp.omega;
  ASSERT_EQ(omega.size(), p.n);
  EXPECT_TRUE(std::is_sorted(omega.begin(), omega.end()));
  EXPECT_EQ(std::adjacent_find(omega.begin(), omega.end()), omega.end());
  EXPECT_LT(omega.back(), p.N);

  unsigned off_equal = 0;
  for (unsigned j = 0; j < p.N; ++j) {
    if (kb.ttp.in_omega(j)) {
      EXPECT_EQ(kb.alice.et_keys[j], kb.bob.et_keys[j]);
    } else {
      off_equal += kb.alice.et_keys[j] == kb.bob.et_keys[j];
    }
  }
  EXPECT_LT(off_equal, 5u);
  for (const PartyKeys* k : {&kb.alice, &kb.bob}) {
    EXPECT_EQ(k->otp.size(), p.hash_vector_bits());
    EXPECT_EQ(k->et_key_bits(), p.per_party_et_key_bits());
    EXPECT_EQ(k->sc_key_bits(), p.per_party_sc_key_bits());
    for (const auto& m : k->mac) EXPECT_EQ(m.tag_bits(), p.mac_bits());
  }
  EXPECT_EQ(kb.alice.session, kb.ttp.session);
  EXPECT_EQ(kb.ttp.alice.et_keys, kb.alice.et_keys);
  EXPECT_EQ(kb.ttp.bob.otp.bits(), kb.bob.otp.bits());
}

TEST(Keys, OmegaIsUniformish) {
  const Params p = experimental_params(4, 2, 2, 4);
  std::map<std::vector<unsigned>, int> seen;
  for (std::uint64_t s = 0; s < 6000; ++s) {
    SeededEntropy rng(s);
    ++seen[keygen(p, rng).ttp.omega];
  }
  ASSERT_EQ(seen.size(), 6u);
  for (const auto& [omega, count] : seen) EXPECT_NEAR(count, 1000, 150);
}

TEST(Keys, SwapRolesAndLimits) {
  const Params p = derive_params(256, pow2(-4));
  SeededEntropy rng(6);
  const KeyBundle kb = keygen(p, rng);
  const KeyBundle sw = swap_roles(kb);
  EXPECT_EQ(sw.alice.et_keys, kb.bob.et_keys);
  EXPECT_EQ(sw.alice.role, Role::Alice);
  EXPECT_EQ(sw.ttp.bob.et_keys, kb.ttp.alice.et_keys);
  EXPECT_EQ(sw.ttp.omega, kb.ttp.omega);

  expect_kind(ErrorKind::ParamDomain, [] {
    SeededEntropy e(1);
    keygen(derive_params(1ull << 50, parse_rational("1e-12")), e);
  });
}

TEST(Keys, SessionIdHex) {
  SessionId id;
  for (std::size_t i = 0; i < id.bytes.size(); ++i) id.bytes[i] = static_cast<std::uint8_t>(i * 17);
  EXPECT_EQ(SessionId::from_hex(id.hex()), id);
  EXPECT_THROW(SessionId::from_hex("zz"), Error);
}

class KeyFileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("etdr-keyfile-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(KeyFileTest, RoundTrip) {
  const Params p = derive_params(300, parse_rational("1/100"));
  SeededEntropy rng(8);
  const KeyBundle kb = keygen(p, rng);
  write_party_keys(dir_ / "a.key", kb.alice);
  write_ttp_secret(dir_ / "t.key", kb.ttp);
  const PartyKeys a = read_party_keys(dir_ / "a.key");
  EXPECT_EQ(a.role, Role::Alice);
  EXPECT_EQ(a.params, p);
  EXPECT_EQ(a.et_keys, kb.alice.et_keys);
  EXPECT_EQ(a.otp.bits(), kb.alice.otp.bits());
  for (std::size_t i = 0; i < kMacSlots; ++i) {
    EXPECT_EQ(a.mac[i].k1(), kb.alice.mac[i].k1());
    EXPECT_EQ(a.mac[i].k2(), kb.alice.mac[i].k2());
  }
  const TtpSecret t = read_ttp_secret(dir_ / "t.key");
  EXPECT_EQ(t.omega, kb.ttp.omega);
  EXPECT_EQ(t.store_key, kb.ttp.store_key);
  EXPECT_EQ(t.bob.et_keys, kb.bob.et_keys);
}

TEST_F(KeyFileTest, CorruptionIsKeyIo) {
  SeededEntropy rng(9);
  const KeyBundle kb = keygen(derive_params(256, pow2(-4)), rng);
  auto bytes = encode_party_keys(kb.bob);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  expect_kind(ErrorKind::KeyIo, [&] { decode_party_keys(bad_magic); });
  auto truncated = bytes;
  truncated.pop_back();
  expect_kind(ErrorKind::KeyIo, [&] { decode_party_keys(truncated); });
  expect_kind(ErrorKind::KeyIo, [&] { decode_ttp_secret(bytes); });
  expect_kind(ErrorKind::KeyIo, [&] { read_party_keys(dir_ / "missing.key"); });
}

TEST_F(KeyFileTest, LedgerRoundTrip) {
  SeededEntropy rng(10);
  KeyBundle kb = keygen(derive_params(256, pow2(-4)), rng);
  const auto path = dir_ / "alice.key";
  EXPECT_EQ(read_ledger(path).otp_consumed, 0u);
  kb.alice.otp.take(100);
  kb.alice.mac_key(MacSlot::EtSubmit).mark_consumed();
  write_ledger(path, KeyLedger::capture(kb.alice));
  PartyKeys fresh = kb.ttp.alice;
  read_ledger(path).apply(fresh);
  EXPECT_EQ(fresh.otp.consumed(), 100u);
  EXPECT_TRUE(fresh.mac_key(MacSlot::EtSubmit).consumed());
  EXPECT_FALSE(fresh.mac_key(MacSlot::DrClaim).consumed());
  write_file_atomic(ledger_path(path), std::vector<std::uint8_t>{'x'});
  expect_kind(ErrorKind::KeyIo, [&] { read_ledger(path); });
}
