#include <gtest/gtest.h>

#include "etdr/adversary.hpp"
#include "etdr/bounds.hpp"
#include "etdr/error.hpp"
#include "etdr/hash.hpp"

using namespace etdr;
using namespace etdr::adversary;

namespace {

Rational eps2_of(const Params& p) { return bounds::epsilon2(p.N, p.n, collision_bound(p.r, p.l)).value; }

unsigned collisions(const PartyKeys& k, const Message& a, const Message& b) {
  const HashVector ha = compute_hash_vector(k, a), hb = compute_hash_vector(k, b);
  unsigned t = 0;
  for (std::size_t j = 0; j < ha.values.size(); ++j) t += ha.values[j] == hb.values[j];
  return t;
}

}  // namespace

TEST(Adversary, WilsonInterval) {
  const Interval none = wilson99(0, 1000);
  EXPECT_EQ(none.low, 0.0);
  EXPECT_GT(none.high, 0.0);
  const Interval half = wilson99(500, 1000);
  EXPECT_NEAR(half.low + half.high, 1.0, 1e-12);
  EXPECT_NEAR(half.high - half.low, 2 * 2.5758 * std::sqrt(0.25 / 1000), 2e-3);
}

TEST(Adversary, HonestClaimRejectedByInvariant) {
  const AttackStrategy honest{"honest", [](const Message& m, const PartyKeys& own, EntropySource&) {
                                return Choice{compute_hash_vector(own, m), m};
                              }};
  try {
    play_game(experimental_params(4, 2, 2, 4), honest, 10, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ProtocolState);
  }
}

TEST(Adversary, SuiteInvariant) {
  const Params p = experimental_params(6, 3, 2, 6);
  const auto suite = strategy_suite();
  EXPECT_GE(suite.size(), 4u);
  for (const auto& s : suite) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      SeededEntropy rng(seed);
      const KeyBundle kb = keygen(p, rng);
      Message m;
      m.append(rng.bits(6), 6);
      const Choice c = s.choose(m, kb.bob, rng);
      EXPECT_FALSE(c.m_star == m) << s.name;
      EXPECT_EQ(c.s_star.values.size(), p.N);
    }
  }
}

TEST(Adversary, DeterministicAndSymmetric) {
  const Params p = experimental_params(6, 3, 2, 6);
  for (const auto& s : strategy_suite()) {
    const GameResult bob = play_game(p, s, 2000, 11, Role::Bob);
    const GameResult again = play_game(p, s, 2000, 11, Role::Bob);
    const GameResult alice = play_game(p, s, 2000, 11, Role::Alice);
    EXPECT_EQ(bob.attacker_wins, again.attacker_wins);
    EXPECT_EQ(bob.et_successes, alice.et_successes) << s.name;
    EXPECT_EQ(bob.attacker_wins, alice.attacker_wins) << s.name;
    EXPECT_LE(bob.attacker_wins, bob.et_successes);
    EXPECT_LE(bob.et_successes, bob.trials);
  }
}

TEST(Adversary, NearestBeatsRandomOnCollisions) {
  const Params p = experimental_params(6, 3, 2, 6);
  const auto suite = strategy_suite();
  const auto find = [&](const std::string& name) {
    return *std::find_if(suite.begin(), suite.end(), [&](const AttackStrategy& s) { return s.name == name; });
  };
  const AttackStrategy nearest = find("truthful-nearest"), random = find("truthful-random");
  double t_near = 0, t_rand = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    SeededEntropy rng(seed);
    const KeyBundle kb = keygen(p, rng);
    Message m;
    m.append(rng.bits(6), 6);
    SeededEntropy r1(seed, 1), r2(seed, 1);
    const unsigned a = collisions(kb.bob, m, nearest.choose(m, kb.bob, r1).m_star);
    const unsigned b = collisions(kb.bob, m, random.choose(m, kb.bob, r2).m_star);
    EXPECT_GE(a, b);
    t_near += a;
    t_rand += b;
  }
  EXPECT_GT(t_near, t_rand);
}

TEST(Adversary, ControlArmNeverLoses) {
  const GameResult g = play_control(derive_params(256, pow2(-4)), 200, 3);
  EXPECT_EQ(g.attacker_wins, 0u);
  EXPECT_EQ(g.et_successes, 200u);
  const GameResult tiny = play_control(experimental_params(4, 2, 2, 4), 2000, 3);
  EXPECT_EQ(tiny.attacker_wins, 0u);
}

TEST(Adversary, ExactOptimumWithinEpsilon2) {
  const Params p = experimental_params(4, 2, 2, 4);
  const ExactResult ex = best_fixed_strategy_exact(p);
  EXPECT_TRUE(ex.exhaustive);
  EXPECT_EQ(ex.views, 4096u);
  EXPECT_LE(ex.worst_view, eps2_of(p));
  EXPECT_LE(ex.average, ex.worst_view);
}

TEST(Adversary, ExactDominatesMonteCarlo) {
  const Params p = experimental_params(4, 2, 2, 4);
  const ExactResult ex = best_fixed_strategy_exact(p);
  for (const auto& s : strategy_suite()) {
    const GameResult g = play_game(p, s, 5000, 21);
    EXPECT_LE(g.ci.low, ex.average.get_d()) << s.name;
  }
}

TEST(Adversary, SingleBlockDataCannotBeModified) {
  // r = l: the hash is the data itself, so no other data collides anywhere.
  const ExactResult ex = best_fixed_strategy_exact(experimental_params(3, 2, 3, 4));
  EXPECT_EQ(ex.worst_view, Rational(0));
}

TEST(Adversary, ExactRejectsLargeStateSpace) {
  EXPECT_THROW(best_fixed_strategy_exact(experimental_params(16, 4, 4, 8)), Error);
}
